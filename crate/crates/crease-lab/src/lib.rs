//! Configuration, command drivers and reports for the `crease-lab` binary.

pub mod commands;
pub mod config;
pub mod report;

use std::path::Path;
use std::time::Instant;

use clifford_core::Result;

pub use config::{Command, RunConfig};
pub use report::{Check, CommandOutput, RunReport, Table, Timing};

/// A finished run: the report and its tables, plus the elapsed time kept out of the report.
pub struct Run {
    pub report: RunReport,
    pub tables: Vec<Table>,
    pub timing: Timing,
}

/// Resolve `config` for `cmd`, apply a seed override and execute.
pub fn execute(cmd: Command, config: RunConfig, seed: Option<u64>) -> Result<Run> {
    let mut cfg = config.resolve(cmd)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let start = Instant::now();
    let out = commands::run(cmd, &cfg)?;
    let timing = Timing { command: cmd.name().to_string(), seconds: start.elapsed().as_secs_f64() };
    Ok(Run { report: RunReport::new(cmd.name(), cfg, &out), tables: out.tables, timing })
}

impl Run {
    pub fn write(&self, dir: &Path) -> Result<()> {
        report::write_outputs(dir, &self.report, &self.tables, &self.timing)
    }
}
