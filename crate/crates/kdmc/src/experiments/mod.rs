//! The six experiment suites. Each takes a config and returns typed rows
//! that serialize to CSV.

use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig, ParamsConfig};
use crate::error::{Error, Result};
use kdmc_core::BackgroundParams;

pub mod constants_check;
pub mod high;
pub mod histogram;
pub mod low;
pub mod moments_check;
pub mod speedup;

pub fn to_csv<R: Serialize>(rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Runtime(format!("csv: {e}")))?;
    }
    w.into_inner().map_err(|e| Error::Runtime(format!("csv: {e}")))
}

/// What a finished run hands back to the CLI.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub csv: Vec<u8>,
    /// Wall-clock measurements; kept out of `csv` so that stays replayable.
    pub timing_csv: Option<Vec<u8>>,
    /// Failed self-checks (only the check suites fill this).
    pub failures: Vec<String>,
}

pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Outcome> {
    let plain = |csv| Outcome { csv, timing_csv: None, failures: vec![] };
    match experiment {
        Experiment::SingleStepLow => Ok(plain(to_csv(&low::run(cfg)?.rows)?)),
        Experiment::SingleStepHigh => Ok(plain(to_csv(&high::run(cfg)?.rows)?)),
        Experiment::Histogram => Ok(plain(to_csv(&histogram::run(cfg)?.rows)?)),
        Experiment::Speedup => {
            let r = speedup::run(cfg)?;
            Ok(Outcome { csv: to_csv(&r.rows)?, timing_csv: Some(to_csv(&r.timing)?), failures: vec![] })
        }
        Experiment::MomentsCheck => {
            let r = moments_check::run(cfg)?;
            Ok(Outcome { csv: to_csv(&r.rows)?, timing_csv: None, failures: r.failures() })
        }
        Experiment::ConstantsCheck => {
            let r = constants_check::run(cfg)?;
            Ok(Outcome { csv: to_csv(&r.rows)?, timing_csv: None, failures: r.failures() })
        }
    }
}

pub(crate) fn params_or(
    cfg: &ExperimentConfig,
    sigma: f64,
    u: f64,
    temperature: f64,
    eps: f64,
) -> Result<BackgroundParams> {
    cfg.params.unwrap_or(ParamsConfig { sigma, u, temperature, eps }).build()
}

pub(crate) fn params_with_eps(p: &BackgroundParams, eps: f64) -> Result<BackgroundParams> {
    BackgroundParams::new(p.sigma, p.u, p.temperature, eps).map_err(|e| Error::ConfigInvalid(e.to_string()))
}

/// eps giving collisionality `a` at step `dt`.
pub(crate) fn eps_for(p: &BackgroundParams, dt: f64, a: f64) -> f64 {
    (p.sigma * dt / a).sqrt()
}
