//! Run configuration: per-command key tables, the flat `key=value` config
//! file, and typed accessors that report the offending key on failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PTKREIN_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "ptkrein-out";
pub const DEFAULT_SEED: &str = "20240917";

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("unknown key `{key}` for command `{command}`")]
    UnknownKey { command: String, key: String },
    #[error("malformed value for `{key}`: {reason}")]
    Malformed { key: String, reason: String },
    #[error("cannot read config file {path}: {source}")]
    ConfigFile { path: PathBuf, source: std::io::Error },
    #[error("config file {path}, line {line}: expected `key = value`")]
    ConfigSyntax { path: PathBuf, line: usize },
}

fn malformed(key: &str, reason: impl Into<String>) -> UsageError {
    UsageError::Malformed { key: key.to_string(), reason: reason.into() }
}

pub struct KeySpec {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
}

const fn k(key: &'static str, default: &'static str, help: &'static str) -> KeySpec {
    KeySpec { key, default, help }
}

/// Keys accepted by every command.
pub const COMMON_KEYS: &[KeySpec] = &[
    k("seed", DEFAULT_SEED, "seed for all random sampling"),
    k("format", "both", "output format: json, csv or both"),
];

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "gauge-scalar",
        about: "Scalar gauge factorization, Krein metric and pseudo-Hermiticity audit for A(x) = alpha + i*beta*x, V = x^2",
        keys: &[
            k("alpha", "1", "real constant part of A"),
            k("beta", "0", "slope of the imaginary linear part of A"),
            k("half_width", "8", "grid covers |x| <= half_width"),
            k("h", "0.05", "grid spacing"),
            k("tol", "1e-8", "pseudo-Hermiticity tolerance"),
            k("closed_form_tol", "1e-12", "relative tolerance against the closed-form gauge factor"),
        ],
    },
    CommandSpec {
        name: "cartan",
        about: "Cartan split, closed-form exponentials, parity relations and polar factorization of a random gauge element",
        keys: &[
            k("p", "2", "positive signature count"),
            k("q", "1", "negative signature count"),
            k("scale", "1", "entries of the random element lie in [-scale, scale)"),
            k("x", "-5:5:101", "sample points start:stop:count"),
            k("tol", "1e-10", "relative tolerance"),
        ],
    },
    CommandSpec {
        name: "lts-check",
        about: "Ternary closure and binary escape of random triples in the gauge algebra",
        keys: &[
            k("p", "2", "positive signature count"),
            k("q", "1", "negative signature count"),
            k("samples", "1000", "number of random triples"),
            k("scale", "1", "entries lie in [-scale, scale)"),
            k("tol", "1e-12", "closure tolerance"),
            k("escape_min", "0.1", "lower bound on the median binary escape"),
        ],
    },
    CommandSpec {
        name: "spectrum-matrix",
        about: "Spectra of the gauged matrix operator and its re-gauged form across grid refinement",
        keys: &[
            k("p", "1", "positive signature count"),
            k("q", "1", "negative signature count"),
            k("gauge", "fixed", "fixed (all off-block entries = gauge_scale) or random"),
            k("gauge_scale", "1", "gauge strength"),
            k("potential", "pt", "harmonic, pt (harmonic plus a fixed PT-symmetric coupling) or random"),
            k("half_width", "8", "grid covers |x| <= half_width"),
            k("h", "0.05", "spacing of the reported level; levels use 2h, h, h/2"),
            k("k", "20", "number of lowest eigenvalues compared"),
            k("tol", "5e-2", "bound on |dlambda|/(1+|lambda|) at spacing h"),
            k("order_min", "1.8", "lower bound on the observed convergence order"),
        ],
    },
    CommandSpec {
        name: "jc",
        about: "Jaynes-Cummings Hamiltonian on truncated Fock space and its grid cross-check",
        keys: &[
            k("p", "1", "positive signature count"),
            k("q", "1", "negative signature count"),
            k("alpha", "0.3", "coupling for p = q = 1"),
            k("scale", "0.5", "random element scale for other signatures"),
            k("omega", "0,0.5", "comma-separated level energies"),
            k("n_max", "12", "Fock truncation"),
            k("half_width", "9", "grid covers |x| <= half_width"),
            k("h", "0.05", "grid spacing"),
            k("k", "6", "number of lowest eigenvalues compared"),
            k("n_op", "6", "highest Fock level in the operator comparison"),
            k("tol", "5e-2", "grid versus Fock agreement"),
            k("trunc_tol", "1e-6", "change of retained levels when n_max grows by 50%"),
        ],
    },
    CommandSpec {
        name: "point-angle",
        about: "Clifford angle and boundary-transform identities for the point interaction",
        keys: &[
            k("t11", "1", "complex entry re+imi"),
            k("t12", "i", "complex entry re+imi"),
            k("t21", "-i", "complex entry re+imi"),
            k("t22", "0", "complex entry re+imi"),
            k("tol", "1e-12", "transform identity tolerance"),
            k("angle_tol", "1e-13", "angle equation tolerance"),
        ],
    },
    CommandSpec {
        name: "point-spectrum",
        about: "Bound states of the point interaction",
        keys: &[
            k("t11", "-2", "complex entry re+imi"),
            k("t12", "0", "complex entry re+imi"),
            k("t21", "0", "complex entry re+imi"),
            k("t22", "0", "complex entry re+imi"),
            k("grid_h", "1e-4", "spacing of the delta-well grid oracle (used when only t11 is nonzero)"),
            k("grid_tol", "1e-3", "grid oracle agreement"),
        ],
    },
    CommandSpec {
        name: "phase-diagram",
        about: "Angle and bound-state reality over a sweep of PT-symmetric coupling matrices",
        keys: &[
            k("t11", "-2:2:5", "sweep start:stop:count"),
            k("t22", "-2:2:5", "sweep start:stop:count"),
            k("im_t12", "-2:2:5", "sweep start:stop:count"),
            k("im_t21", "-2:2:5", "sweep start:stop:count"),
        ],
    },
    CommandSpec {
        name: "verify-all",
        about: "Full verification suite at default parameters",
        keys: &[],
    },
];

pub fn command_spec(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Resolved configuration: every key of the command present, defaults filled.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: BTreeMap<String, String>,
    pub out_dir: PathBuf,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| UsageError::ConfigFile { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or(UsageError::ConfigSyntax { path: path.to_path_buf(), line: i + 1 })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(UsageError::ConfigSyntax { path: path.to_path_buf(), line: i + 1 });
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Defaults, then the config file, then explicit flags.
    pub fn resolve(
        command: &str,
        file: &[(String, String)],
        flags: &[(String, String)],
        out_dir: Option<PathBuf>,
    ) -> Result<Self, UsageError> {
        let spec = command_spec(command).ok_or_else(|| UsageError::UnknownCommand(command.to_string()))?;
        let mut params = BTreeMap::new();
        for key in COMMON_KEYS.iter().chain(spec.keys) {
            params.insert(key.key.to_string(), key.default.to_string());
        }
        for (key, value) in file.iter().chain(flags) {
            if !params.contains_key(key) {
                return Err(UsageError::UnknownKey { command: command.to_string(), key: key.clone() });
            }
            params.insert(key.clone(), value.clone());
        }
        let out_dir = out_dir
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let cfg = RunConfig { command: spec.name, params, out_dir };
        cfg.format()?;
        cfg.seed()?;
        Ok(cfg)
    }

    fn raw(&self, key: &str) -> Result<&str, UsageError> {
        self.params.get(key).map(String::as_str).ok_or_else(|| malformed(key, "missing"))
    }

    pub fn format(&self) -> Result<Format, UsageError> {
        match self.raw("format")? {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            other => Err(malformed("format", format!("expected json, csv or both, got `{other}`"))),
        }
    }

    pub fn seed(&self) -> Result<u64, UsageError> {
        let v = self.raw("seed")?;
        v.parse().map_err(|_| malformed("seed", format!("expected an unsigned integer, got `{v}`")))
    }

    pub fn text(&self, key: &str) -> Result<String, UsageError> {
        self.raw(key).map(str::to_string)
    }

    pub fn f64(&self, key: &str) -> Result<f64, UsageError> {
        parse_f64(key, self.raw(key)?)
    }

    /// Finite and strictly positive.
    pub fn positive(&self, key: &str) -> Result<f64, UsageError> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(malformed(key, format!("must be > 0, got {v}")))
        }
    }

    pub fn usize_min(&self, key: &str, min: usize) -> Result<usize, UsageError> {
        let v = self.raw(key)?;
        let n: usize = v.parse().map_err(|_| malformed(key, format!("expected an unsigned integer, got `{v}`")))?;
        if n < min {
            return Err(malformed(key, format!("must be at least {min}, got {n}")));
        }
        Ok(n)
    }

    pub fn complex(&self, key: &str) -> Result<C64, UsageError> {
        parse_complex(self.raw(key)?).map_err(|reason| malformed(key, reason))
    }

    pub fn sweep(&self, key: &str) -> Result<Vec<f64>, UsageError> {
        parse_sweep(self.raw(key)?).map_err(|reason| malformed(key, reason))
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, UsageError> {
        self.raw(key)?.split(',').map(|s| parse_f64(key, s.trim())).collect()
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, UsageError> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(malformed(key, format!("expected a finite number, got `{v}`"))),
    }
}

/// `re+imi` forms such as `1`, `-i`, `0.5-2i`, `1e-3+4e-1i`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let z = C64::from_str(s.trim()).map_err(|_| format!("expected a complex number like 1+2i, got `{s}`"))?;
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite complex value `{s}`"))
    }
}

/// `start:stop:count`, endpoints included; a count of 1 yields `[start]`.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected start:stop:count, got `{s}`"));
    }
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|x| x.is_finite());
    let (start, stop) = match (num(parts[0]), num(parts[1])) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(format!("non-numeric sweep bounds in `{s}`")),
    };
    let count: usize = parts[2].trim().parse().map_err(|_| format!("bad sweep count in `{s}`"))?;
    if count == 0 {
        return Err("sweep count must be at least 1".into());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5-2i").unwrap(), C64::new(0.5, -2.0));
        assert_eq!(parse_complex("1e-3+4e-1i").unwrap(), C64::new(1e-3, 0.4));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(parse_sweep("-2:2:5").unwrap(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(parse_sweep("3:7:1").unwrap(), vec![3.0]);
        assert!(parse_sweep("0:1:0").is_err());
        assert!(parse_sweep("0:1").is_err());
        assert!(parse_sweep("a:1:3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = vec![("alpha".to_string(), "0.1".to_string()), ("h".to_string(), "0.1".to_string())];
        let flags = vec![("alpha".to_string(), "0.7".to_string())];
        let cfg = RunConfig::resolve("gauge-scalar", &file, &flags, Some(PathBuf::from("o"))).unwrap();
        assert_eq!(cfg.f64("alpha").unwrap(), 0.7);
        assert_eq!(cfg.f64("h").unwrap(), 0.1);
        assert_eq!(cfg.f64("beta").unwrap(), 0.0);
    }

    #[test]
    fn errors_name_the_key() {
        let bad = vec![("nope".to_string(), "1".to_string())];
        let e = RunConfig::resolve("cartan", &[], &bad, None).unwrap_err();
        assert!(e.to_string().contains("`nope`"));
        let cfg = RunConfig::resolve("cartan", &[], &[("tol".into(), "-1".into())], None).unwrap();
        assert!(cfg.positive("tol").unwrap_err().to_string().contains("`tol`"));
        assert!(RunConfig::resolve("nothing", &[], &[], None).is_err());
        assert!(RunConfig::resolve("cartan", &[], &[("format".into(), "xml".into())], None).is_err());
    }

    #[test]
    fn config_file_syntax() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# comment\nalpha = 0.25\n\nbeta=0.5 # trailing\n").unwrap();
        let pairs = parse_config_file(&path).unwrap();
        assert_eq!(pairs, vec![("alpha".into(), "0.25".into()), ("beta".into(), "0.5".into())]);
        std::fs::write(&path, "alpha 0.25\n").unwrap();
        assert!(matches!(parse_config_file(&path), Err(UsageError::ConfigSyntax { line: 1, .. })));
    }
}
