//! Single step at small dt: kinetic vs KD on paths with a collision.

use kdmc_core::moments::bound_low_conditioned;
use kdmc_core::{diffusive_substep, kinetic, sample_maxwellian, w1_empirical, BackgroundParams, Draws, Medium};
use serde::Serialize;

use super::params_or;
use crate::config::{log_grid, ExperimentConfig};
use crate::error::Result;
use crate::oracle::conditional_w1;
use crate::parallel::{par_map, rng};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub dt: f64,
    pub w1_cond_v_theta: f64,
    pub w1_cond_v: f64,
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct LowResult {
    pub rows: Vec<Row>,
    /// Standard error of each `w1_cond_v_theta`.
    pub se_cond_v_theta: Vec<f64>,
}

pub struct Settings {
    pub params: BackgroundParams,
    pub dt_grid: Vec<f64>,
    pub particles: usize,
    pub v0: f64,
    pub inner: usize,
    pub bins: usize,
    pub seed: u64,
}

impl Settings {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Settings {
            params: params_or(cfg, 1.0, 1.0, 1.0, 1.0)?,
            dt_grid: cfg.dt_grid.clone().unwrap_or_else(|| log_grid(1e-2, 1.0, 9)),
            particles: cfg.particles.unwrap_or(200_000),
            v0: cfg.initial_velocity.unwrap_or(1.0),
            inner: cfg.inner_samples.unwrap_or(32),
            bins: cfg.velocity_bins.unwrap_or(100),
            seed: cfg.seed,
        })
    }
}

struct Path {
    nu: f64,
    kinetic: f64,
    kd: f64,
    w1: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<LowResult> {
    run_with(&Settings::from_config(cfg)?)
}

pub fn run_with(s: &Settings) -> Result<LowResult> {
    let p = s.params;
    let mut rows = Vec::new();
    let mut ses = Vec::new();
    for (point, &dt) in s.dt_grid.iter().enumerate() {
        let mut paths = par_map(s.particles, |i| {
            let mut r = rng(s.seed, point as u64, 0, i as u64);
            // keep only paths that collide inside the step
            let dtau = loop {
                let t = p.flight_time(0.0, s.v0, r.standard_exponential());
                if t < dt {
                    break t;
                }
            };
            let theta = dt - dtau;
            let nu = sample_maxwellian(&p, &mut r);
            let start = s.v0 / p.eps * dtau;
            let kinetic = start + kinetic::conditioned_increment(&p, theta, nu, &mut r).0;
            let kd = start + diffusive_substep(nu, theta, &p, &mut r);
            let mut buf = Vec::with_capacity(s.inner + 1);
            let w1 = conditional_w1(&p, theta, nu, s.inner, &mut r, &mut buf);
            Path { nu, kinetic, kd, w1 }
        });
        let n = paths.len() as f64;
        let mean = paths.iter().map(|q| q.w1).sum::<f64>() / n;
        let var = paths.iter().map(|q| (q.w1 - mean) * (q.w1 - mean)).sum::<f64>() / (n - 1.0);

        paths.sort_by(|a, b| a.nu.total_cmp(&b.nu));
        let bins = s.bins.min(paths.len());
        let mut w1_v = 0.0;
        for b in 0..bins {
            let lo = b * paths.len() / bins;
            let hi = (b + 1) * paths.len() / bins;
            let k: Vec<f64> = paths[lo..hi].iter().map(|q| q.kinetic).collect();
            let d: Vec<f64> = paths[lo..hi].iter().map(|q| q.kd).collect();
            w1_v += w1_empirical(&k, &d)?.distance * (hi - lo) as f64;
        }
        rows.push(Row { dt, w1_cond_v_theta: mean, w1_cond_v: w1_v / n, bound: bound_low_conditioned(&p, dt) });
        ses.push((var / n).sqrt());
    }
    Ok(LowResult { rows, se_cond_v_theta: ses })
}
