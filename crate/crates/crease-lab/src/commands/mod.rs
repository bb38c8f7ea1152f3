//! One module per command. Each returns raw results, checks and tables.

pub mod adm;
pub mod crease_check;
pub mod identities;
pub mod rigidity;
pub mod solve;

use clifford_core::{Error, Result};
use geometry_catalog::{catalog, CatalogSpec, CreasedData, InitialData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RunConfig};
use crate::report::CommandOutput;

/// Runs a resolved configuration.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<CommandOutput> {
    let missing = || Error::Config(format!("missing section for '{}'", cmd.name()));
    match cmd {
        Command::CreaseCheck => crease_check::run(cfg.crease_check.as_ref().ok_or_else(missing)?, cfg.seed),
        Command::Adm => adm::run(cfg.adm.as_ref().ok_or_else(missing)?),
        Command::Identities => identities::run(cfg.identities.as_ref().ok_or_else(missing)?, cfg.seed),
        Command::Solve => solve::run(cfg.solve.as_ref().ok_or_else(missing)?),
        Command::Rigidity => rigidity::run(cfg.rigidity.as_ref().ok_or_else(missing)?, cfg.seed),
    }
}

/// Independent streams for the parts of one command.
pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub(crate) fn data(spec: &CatalogSpec) -> Result<InitialData> {
    catalog(spec).and_then(|e| e.into_data()).map_err(config)
}

pub(crate) fn creased(spec: &CatalogSpec) -> Result<CreasedData> {
    catalog(spec).and_then(|e| e.into_creased()).map_err(config)
}

/// Catalog misuse in a config file is a configuration error.
fn config(e: Error) -> Error {
    match e {
        Error::Argument(m) => Error::Config(m),
        other => other,
    }
}

pub(crate) fn max(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}
