//! Experiment harness for the kinetic-diffusion Monte Carlo toolkit: JSON
//! configs, deterministic parallel ensembles, conditioned oracles and CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod config;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod parallel;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig};
pub use error::{Error, Result};
pub use experiments::Outcome;

/// Run `experiment` on `threads` workers (rayon's default when `None`).
pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Outcome> {
    if let Some(e) = cfg.experiment {
        if e != experiment {
            return Err(Error::ConfigInvalid(format!("config is for {e}, asked to run {experiment}")));
        }
    }
    parallel::with_threads(cfg.threads, || experiments::run(experiment, cfg))
}

pub fn emit_csv(bytes: &[u8], path: &Path) -> Result<()> {
    let out = |source| Error::Output { path: path.to_owned(), source };
    let mut f = std::fs::File::create(path).map_err(out)?;
    f.write_all(bytes).map_err(out)?;
    f.flush().map_err(out)
}

/// `runs/x.csv` -> `runs/x.timing.csv`
pub fn timing_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.timing.csv"))
}
