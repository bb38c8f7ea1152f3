//! Report structures and atomic output.

use std::io::Write;
use std::path::Path;

use clifford_core::{Error, Result};
use serde::Serialize;

use crate::config::RunConfig;

pub const SCHEMA: &str = "crease-lab.report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value <= threshold`
    Le,
    /// `value >= threshold`
    Ge,
}

/// One comparison of a raw value against a configured threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    /// `false` for negative controls, which pass when the comparison fails.
    pub expect_hold: bool,
    pub holds: bool,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, threshold: f64, relation: Relation) -> Self {
        let holds = match relation {
            Relation::Le => value <= threshold,
            Relation::Ge => value >= threshold,
        };
        Self { name: name.to_string(), value, threshold, relation, expect_hold: true, holds, passed: holds }
    }

    pub fn le(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, Relation::Le)
    }

    pub fn ge(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, Relation::Ge)
    }

    /// A boolean hypothesis, stored as `1` or `0` against `>= 1`.
    pub fn flag(name: &str, holds: bool) -> Self {
        Self::ge(name, if holds { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn expect_failure(mut self) -> Self {
        self.expect_hold = false;
        self.passed = !self.holds;
        self
    }
}

/// A numeric table written as CSV next to the report.
#[derive(Debug, Clone)]
pub struct Table {
    pub file_name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(file_name: &str, headers: &[&str]) -> Self {
        Self { file_name: file_name.to_string(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Numeric(format!("csv: {e}"));
        w.write_record(&self.headers).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| format!("{v:e}"))).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Numeric(format!("csv: {e}")))
    }
}

/// What a command hands back to the driver.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub schema_version: u32,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str, config: RunConfig, out: &CommandOutput) -> Self {
        Self {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: config.seed,
            config,
            results: out.results.clone(),
            checks: out.checks.clone(),
            passed: out.checks.iter().all(|c| c.passed),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numeric(format!("report serialization: {e}")))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn to_json_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Numeric(format!("report serialization: {e}")))
}

/// Write `bytes` to `dir/name` through a temporary file in the same directory.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Config(format!("cannot write '{}': {e}", dir.join(name).display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub command: String,
    pub seconds: f64,
}

/// `report.json`, one CSV per table and `timing.json`.
pub fn write_outputs(dir: &Path, report: &RunReport, tables: &[Table], timing: &Timing) -> Result<()> {
    write_atomic(dir, "report.json", report.to_json()?.as_bytes())?;
    for t in tables {
        write_atomic(dir, &t.file_name, &t.to_csv()?)?;
    }
    let tj = serde_json::to_string_pretty(timing).map_err(|e| Error::Numeric(e.to_string()))?;
    write_atomic(dir, "timing.json", tj.as_bytes())
}
