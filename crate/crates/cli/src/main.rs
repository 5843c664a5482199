use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Arg, ArgMatches, Command};

use ptkrein_cli::config::{parse_config_file, COMMANDS, COMMON_KEYS, OUT_DIR_ENV};
use ptkrein_cli::{emit, run, RunConfig, UsageError};

fn cli() -> Command {
    let mut app = Command::new("ptkrein")
        .about("PT-symmetric Krein-space operator checks")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in COMMANDS {
        let mut sub = Command::new(spec.name)
            .about(spec.about)
            .arg(Arg::new("config").long("config").value_name("FILE").help("key = value file; flags override it"))
            .arg(
                Arg::new("out")
                    .long("out")
                    .value_name("DIR")
                    .help(format!("output directory (default ${OUT_DIR_ENV} or ptkrein-out)")),
            );
        for key in COMMON_KEYS.iter().chain(spec.keys) {
            sub = sub.arg(
                Arg::new(key.key)
                    .long(key.key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", key.help, key.default)),
            );
        }
        app = app.subcommand(sub);
    }
    app
}

fn resolve(name: &str, m: &ArgMatches) -> Result<RunConfig, UsageError> {
    let file = match m.get_one::<String>("config") {
        Some(path) => parse_config_file(&PathBuf::from(path))?,
        None => Vec::new(),
    };
    let spec = COMMANDS.iter().find(|c| c.name == name).ok_or_else(|| UsageError::UnknownCommand(name.into()))?;
    let flags: Vec<(String, String)> = COMMON_KEYS
        .iter()
        .chain(spec.keys)
        .filter_map(|k| m.get_one::<String>(k.key).map(|v| (k.key.to_string(), v.clone())))
        .collect();
    RunConfig::resolve(name, &file, &flags, m.get_one::<String>("out").map(PathBuf::from))
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let cfg = match resolve(name, sub) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let started = Instant::now();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let format = cfg.format().expect("validated on resolve");
    let files = match emit(&report, &cfg.out_dir, format.json(), format.csv()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for c in &report.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        let rel = if c.relation == "le" { "<=" } else { ">=" };
        println!("{mark} {}: {:.3e} {rel} {:.1e}", c.name, c.residual, c.tolerance);
    }
    for f in &files {
        println!("wrote {}", f.display());
    }
    eprintln!("wall time: {:.2} s", started.elapsed().as_secs_f64());
    if report.pass {
        println!("{}: pass", report.command);
        ExitCode::SUCCESS
    } else {
        println!("{}: FAIL", report.command);
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_table_is_consistent() {
        cli().debug_assert();
    }
}
