//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ptkrein_cli::config::DEFAULT_SEED;
use ptkrein_cli::suite::{run_criterion, TITLES};

const VERIFY_ALL_LIMIT: Duration = Duration::from_secs(300);

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("output directory")
        .map(|e| {
            let e = e.expect("entry");
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).expect("readable"))
        })
        .collect()
}

fn verify_all_twice() -> Result<String, String> {
    let mut outputs = Vec::new();
    let mut slowest = Duration::ZERO;
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let started = Instant::now();
        let status = Command::new(env!("CARGO_BIN_EXE_ptkrein"))
            .args(["verify-all", "--out"])
            .arg(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(started.elapsed());
        if !status.status.success() {
            return Err(format!("exit status {:?}", status.status.code()));
        }
        outputs.push(read_dir(dir.path()));
    }
    if slowest > VERIFY_ALL_LIMIT {
        return Err(format!("took {:.1} s", slowest.as_secs_f64()));
    }
    if outputs[0].is_empty() || outputs[0] != outputs[1] {
        return Err("outputs differ between runs".into());
    }
    Ok(format!("{} files identical, slowest run {:.1} s", outputs[0].len(), slowest.as_secs_f64()))
}

fn main() {
    let seed: u64 = DEFAULT_SEED.parse().expect("default seed");
    let mut failures = 0;
    for n in 1..=10 {
        match run_criterion(n, seed) {
            Ok(c) if c.pass() => println!("PASS criterion {n}: {}", c.title),
            Ok(c) => {
                failures += 1;
                println!("FAIL criterion {n}: {}", c.title);
                for k in c.analysis.checks.iter().filter(|k| !k.pass) {
                    println!("    {}: residual {:e}, tolerance {:e}", k.name, k.residual, k.tolerance);
                }
            }
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {n}: {} ({e})", TITLES[n - 1]);
            }
        }
    }
    match verify_all_twice() {
        Ok(detail) => println!("PASS criterion 11: verify-all exit 0, runtime, reproducible outputs ({detail})"),
        Err(e) => {
            failures += 1;
            println!("FAIL criterion 11: verify-all exit 0, runtime, reproducible outputs ({e})");
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
