//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kdmc_core::metrics::HistogramSpec;
use kdmc_core::BackgroundParams;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SingleStepLow,
    SingleStepHigh,
    Histogram,
    Speedup,
    MomentsCheck,
    ConstantsCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::SingleStepLow,
        Experiment::SingleStepHigh,
        Experiment::Histogram,
        Experiment::Speedup,
        Experiment::MomentsCheck,
        Experiment::ConstantsCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SingleStepLow => "single-step-low",
            Experiment::SingleStepHigh => "single-step-high",
            Experiment::Histogram => "histogram",
            Experiment::Speedup => "speedup",
            Experiment::MomentsCheck => "moments-check",
            Experiment::ConstantsCheck => "constants-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment {s}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub sigma: f64,
    pub u: f64,
    pub temperature: f64,
    pub eps: f64,
}

impl ParamsConfig {
    pub fn build(&self) -> Result<BackgroundParams> {
        BackgroundParams::new(self.sigma, self.u, self.temperature, self.eps)
            .map_err(|e| Error::ConfigInvalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramConfig {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl From<HistogramConfig> for HistogramSpec {
    fn from(h: HistogramConfig) -> Self {
        HistogramSpec { lo: h.lo, hi: h.hi, bins: h.bins }
    }
}

/// Everything an experiment may read. Fields an experiment does not use are
/// ignored by it; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collisionality_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// single-step-low: the common starting velocity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_velocity: Option<f64>,
    /// single-step-low: kinetic draws per (velocity, remaining time) pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_samples: Option<usize>,
    /// single-step-low: number of final-velocity groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity_bins: Option<usize>,
    /// single-step-high: (v - eps u) / sqrt(T) values to condition on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_velocities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
    /// speedup: timing repetitions (median is reported).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    /// speedup: run enough steps that KD executes at least this many collisions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_kd_collisions: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperatures: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drifts: Option<Vec<f64>>,
    /// moments-check: offsets c in v_final = eps u + c sqrt(T).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity_offsets: Option<Vec<f64>>,
    /// histogram: centres of the equal-weight Gaussian source modes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_means: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_std: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(seed: u64) -> Self {
        ExperimentConfig { seed, ..Default::default() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| Error::ConfigRead { path: path.to_owned(), source })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.particles == Some(0) {
            return bad("particles must be positive".into());
        }
        for (name, v) in [
            ("inner_samples", self.inner_samples),
            ("velocity_bins", self.velocity_bins),
            ("bootstrap", self.bootstrap),
            ("repetitions", self.repetitions),
            ("threads", self.threads),
        ] {
            if v == Some(0) {
                return bad(format!("{name} must be positive"));
            }
        }
        for (name, v) in [("dt", self.dt), ("t_end", self.t_end), ("source_std", self.source_std)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return bad(format!("{name} must be positive, got {x}"));
                }
            }
        }
        for (name, grid, positive) in [
            ("dt_grid", &self.dt_grid, true),
            ("collisionality_grid", &self.collisionality_grid, true),
            ("eps_grid", &self.eps_grid, true),
            ("temperatures", &self.temperatures, true),
            ("drifts", &self.drifts, false),
            ("final_velocities", &self.final_velocities, false),
            ("velocity_offsets", &self.velocity_offsets, false),
            ("source_means", &self.source_means, false),
        ] {
            if let Some(g) = grid {
                check_grid(name, g, positive)?;
            }
        }
        if let Some(p) = &self.params {
            p.build()?;
        }
        if let Some(h) = self.histogram {
            if h.bins == 0 || !(h.lo < h.hi) {
                return bad("histogram needs bins > 0 and lo < hi".into());
            }
        }
        Ok(())
    }
}

fn check_grid(name: &str, g: &[f64], positive: bool) -> Result<()> {
    if g.is_empty() {
        return Err(Error::ConfigInvalid(format!("{name} is empty")));
    }
    if g.iter().any(|x| !x.is_finite() || (positive && *x <= 0.0)) {
        return Err(Error::ConfigInvalid(format!("{name} has a non-finite or non-positive entry")));
    }
    if g.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::ConfigInvalid(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_histogram_roundtrip() {
        let cfg = ExperimentConfig::parse(r#"{"experiment": "histogram", "seed": 1}"#).unwrap();
        assert_eq!(cfg.experiment, Some(Experiment::Histogram));
        assert_eq!(ExperimentConfig::parse(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(ExperimentConfig::parse(r#"{"particles": 3}"#), Err(Error::ConfigMissing(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": 1, "sead": 2}"#), Err(Error::ConfigUnknown(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": 1,"#), Err(Error::ConfigSyntax(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": -1}"#), Err(Error::ConfigInvalid(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": 1, "dt_grid": [1, 0.5]}"#), Err(Error::ConfigInvalid(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": 1, "dt_grid": []}"#), Err(Error::ConfigInvalid(_))));
        assert!(matches!(ExperimentConfig::parse(r#"{"seed": 1, "particles": 0}"#), Err(Error::ConfigInvalid(_))));
        assert!(matches!(
            ExperimentConfig::parse(r#"{"seed": 1, "params": {"sigma": 0, "u": 0, "temperature": 1, "eps": 1}}"#),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            ExperimentConfig::parse(r#"{"seed": 1, "params": {"sigma": 1, "u": 0, "temp": 1, "eps": 1}}"#),
            Err(Error::ConfigUnknown(_))
        ));
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(0.01, 1.0, 9);
        assert_eq!(g.len(), 9);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[8] - 1.0).abs() < 1e-15);
        assert!((g[4] - 0.1).abs() < 1e-15);
    }
}
