//! Closed-form step moments against brute-force kinetic ensembles.

use kdmc_core::moments;
use kdmc_core::{sample_maxwellian, simulate_kinetic, ParticleState};
use serde::Serialize;

use super::{eps_for, params_or};
use crate::config::{ExperimentConfig, ParamsConfig};
use crate::error::Result;
use crate::oracle::oracle_conditioned_increment;
use crate::parallel::{par_accumulate, rng};

/// Allowed deviation in standard errors.
pub const TOLERANCE_SE: f64 = 4.0;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub collisionality: f64,
    pub temperature: f64,
    pub u: f64,
    pub eps: f64,
    /// Empty for the unconditioned ensemble.
    pub v_final: Option<f64>,
    pub mean_formula: f64,
    pub mean_mc: f64,
    pub mean_se: f64,
    pub var_formula: f64,
    pub var_mc: f64,
    pub var_se: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct MomentsResult {
    pub rows: Vec<Row>,
}

impl MomentsResult {
    pub fn failures(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| {
                format!(
                    "a={} T={} u={} v={:?}: mean {} vs {} (se {}), var {} vs {} (se {})",
                    r.collisionality,
                    r.temperature,
                    r.u,
                    r.v_final,
                    r.mean_mc,
                    r.mean_formula,
                    r.mean_se,
                    r.var_mc,
                    r.var_formula,
                    r.var_se
                )
            })
            .collect()
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<MomentsResult> {
    let base = params_or(cfg, 1.0, 0.0, 1.0, 1.0)?;
    let grid = cfg.collisionality_grid.clone().unwrap_or_else(|| vec![0.1, 1.0, 10.0, 100.0]);
    let temps = cfg.temperatures.clone().unwrap_or_else(|| vec![0.5, 1.0]);
    let drifts = cfg.drifts.clone().unwrap_or_else(|| vec![0.0, 1.0]);
    let offsets = cfg.velocity_offsets.clone().unwrap_or_else(|| vec![-2.0, 0.0, 2.0]);
    let n = cfg.particles.unwrap_or(1_000_000);
    let dt = cfg.dt.unwrap_or(1.0);
    let seed = cfg.seed;

    let mut rows = Vec::new();
    let mut point = 0u64;
    for &a in &grid {
        for &t in &temps {
            for &u in &drifts {
                let eps = eps_for(&base, dt, a);
                let p = ParamsConfig { sigma: base.sigma, u, temperature: t, eps }.build()?;
                let mut cases: Vec<Option<f64>> = offsets.iter().map(|c| Some(eps * u + c * t.sqrt())).collect();
                cases.push(None);
                for v in cases {
                    let (m, acc) = match v {
                        Some(v) => {
                            (moments::conditioned(&p, dt, v), oracle_conditioned_increment(&p, dt, v, n, seed, point))
                        }
                        None => {
                            let acc = par_accumulate(n, |i| {
                                let mut r = rng(seed, point, 0, i as u64);
                                let s = ParticleState::new(0.0, sample_maxwellian(&p, &mut r), 0.0);
                                simulate_kinetic(&s, dt, &p, &mut r).map(|x| x.final_state.x).unwrap_or(f64::NAN)
                            });
                            (moments::unconditioned(&p, dt), acc)
                        }
                    };
                    point += 1;
                    let (mean_se, var_se) = (acc.se_mean(), acc.se_variance());
                    let pass = (acc.mean - m.mean).abs() <= TOLERANCE_SE * mean_se
                        && (acc.variance() - m.variance).abs() <= TOLERANCE_SE * var_se;
                    rows.push(Row {
                        collisionality: a,
                        temperature: t,
                        u,
                        eps,
                        v_final: v,
                        mean_formula: m.mean,
                        mean_mc: acc.mean,
                        mean_se,
                        var_formula: m.variance,
                        var_mc: acc.variance(),
                        var_se,
                        pass,
                    });
                }
            }
        }
    }
    Ok(MomentsResult { rows })
}
