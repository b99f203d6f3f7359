//! CSV artifacts with a config-hash comment line and a fixed header.

use std::path::Path;

use crate::error::CliError;

/// Schema version of every CSV this crate writes.
pub const SCHEMA: &str = "1";

/// Formats `v` identically on every run: shortest round-trip digits, with
/// scientific notation for very small or very large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v != 0.0 && v.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// A CSV table held in memory until written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_header(name: &str, header: Vec<String>) -> Table {
        Table { name: name.to_string(), header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// File contents: the hash comment, the header, then the rows.
    pub fn render(&self, hash: &str) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
        format!("# config-hash: {hash}\n# schema: {}/{SCHEMA}\n{body}", self.name)
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    /// `key: value` lines for the plain-text summary.
    pub summary: Vec<(String, String)>,
    /// Set when the run completed but some evaluation was infeasible.
    pub infeasible: Option<String>,
}

impl Artifacts {
    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn summary_text(&self, command: &str, hash: &str) -> String {
        let mut s = format!("command: {command}\nconfig-hash: {hash}\n");
        for (k, v) in &self.summary {
            s.push_str(&format!("{k}: {v}\n"));
        }
        if let Some(why) = &self.infeasible {
            s.push_str(&format!("infeasible: {why}\n"));
        }
        s
    }

    /// Writes every table as `<name>.csv` and the summary as `<command>.txt`.
    pub fn write(&self, dir: &Path, command: &str, hash: &str) -> Result<(), CliError> {
        let out = |path: std::path::PathBuf, text: String| {
            std::fs::write(&path, text).map_err(|source| CliError::Output { path, source })
        };
        std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
        for t in &self.tables {
            out(dir.join(format!("{}.csv", t.name)), t.render(hash))?;
        }
        out(dir.join(format!("{command}.txt")), self.summary_text(command, hash))
    }
}
