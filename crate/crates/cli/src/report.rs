//! Report model and emission.
//!
//! JSON keys appear in struct field order. CSV numbers use `{:.16e}`
//! (17 significant digits). Wall time is never written to files so that
//! identical configurations give identical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ptkrein::Check;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub relation: &'static str,
    pub pass: bool,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord {
            name: c.name.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
            relation: c.relation.as_str(),
            pass: c.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Cell,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub pass: bool,
    pub values: Vec<NamedValue>,
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            config,
            seed,
            pass: true,
            values: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn value(&mut self, name: &str, value: impl Into<Cell>) {
        self.values.push(NamedValue { name: name.to_string(), value: value.into() });
    }

    pub fn check(&mut self, c: &Check) {
        self.pass &= c.pass;
        self.checks.push(c.into());
    }

    pub fn checks<'a>(&mut self, cs: impl IntoIterator<Item = &'a Check>) {
        for c in cs {
            self.check(c);
        }
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }
}

/// Keeps the worst instance of each check name, in first-seen order.
pub fn worst_by_name(checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for c in checks {
        match out.iter_mut().find(|o| o.name == c.name) {
            Some(o) => {
                let worse = match c.relation {
                    ptkrein::Relation::AtMost => !(c.residual <= o.residual),
                    ptkrein::Relation::AtLeast => !(c.residual >= o.residual),
                };
                if worse || (!c.pass && o.pass) {
                    *o = c;
                }
            }
            None => out.push(c),
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct EmitError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EmitError + '_ {
    move |source| EmitError { path: path.to_path_buf(), source }
}

/// Writes `<command>.json` and/or `<command>_<table>.csv` under `dir`.
pub fn emit(report: &Report, dir: &Path, json: bool, csv: bool) -> Result<Vec<PathBuf>, EmitError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    if json {
        let path = dir.join(format!("{}.json", report.command));
        let mut text = serde_json::to_string_pretty(report)
            .map_err(|e| EmitError { path: path.clone(), source: std::io::Error::other(e) })?;
        text.push('\n');
        std::fs::write(&path, text).map_err(io_err(&path))?;
        written.push(path);
    }
    if csv {
        for t in &report.tables {
            let path = dir.join(format!("{}_{}.csv", report.command, t.name));
            let mut w = csv::Writer::from_path(&path).map_err(|e| EmitError { path: path.clone(), source: e.into() })?;
            let to_io = |e: csv::Error| EmitError { path: path.clone(), source: e.into() };
            w.write_record(&t.columns).map_err(to_io)?;
            for row in &t.rows {
                w.write_record(row.iter().map(Cell::csv)).map_err(|e| EmitError { path: path.clone(), source: e.into() })?;
            }
            w.flush().map_err(io_err(&path))?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", BTreeMap::from([("b".into(), "2".into()), ("a".into(), "1".into())]), 7);
        r.value("phi", 0.5);
        r.check(&Check::at_most("small", 1e-15, 1e-12));
        let mut t = Table::new("rows", &["index", "value", "flag", "label"]);
        t.push(vec![0usize.into(), (1.0f64 / 3.0).into(), true.into(), "x".into()]);
        r.table(t);
        r
    }

    #[test]
    fn json_key_order_and_csv_precision() {
        let dir = tempfile::tempdir().unwrap();
        let files = emit(&sample(), dir.path(), true, true).unwrap();
        assert_eq!(files.len(), 2);
        let json = std::fs::read_to_string(&files[0]).unwrap();
        let pos = |k: &str| json.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("command") < pos("config") && pos("config") < pos("seed") && pos("seed") < pos("pass"));
        assert!(pos("values") < pos("checks") && pos("checks") < pos("tables"));
        assert!(json.find("\"a\"").unwrap() < json.find("\"b\"").unwrap());
        let csv = std::fs::read_to_string(&files[1]).unwrap();
        assert_eq!(csv, "index,value,flag,label\n0,3.3333333333333331e-1,true,x\n");
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = sample();
        assert!(r.pass);
        r.check(&Check::at_least("big", 0.0, 1.0));
        assert!(!r.pass);
    }

    #[test]
    fn worst_instance_kept() {
        let merged = worst_by_name(vec![
            Check::at_most("a", 1e-14, 1e-12),
            Check::at_least("b", 3.0, 1.0),
            Check::at_most("a", 1e-13, 1e-12),
            Check::at_least("b", 2.0, 1.0),
        ]);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].residual, 1e-13);
        assert_eq!(merged[1].residual, 2.0);
    }

    #[test]
    fn unwritable_path_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        std::fs::write(&file, "x").unwrap();
        let err = emit(&sample(), &file.join("sub"), true, false).unwrap_err();
        assert!(err.to_string().contains("plain"));
    }
}
