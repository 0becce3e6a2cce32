//! Single step of length dt at large collisionality: kinetic vs KD.

use kdmc_core::moments::{bound_high_collisional, high_collisional_eps2};
use kdmc_core::{
    diffusive_substep, kinetic, sample_maxwellian, simulate_kd, simulate_kinetic, w1_empirical, BackgroundParams,
    Draws, Medium, ParticleState,
};
use serde::Serialize;

use super::{eps_for, params_or, params_with_eps};
use crate::config::{log_grid, ExperimentConfig};
use crate::error::Result;
use crate::parallel::{par_map, rng};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub collisionality: f64,
    pub eps: f64,
    /// Conditioning value (v - eps u) / sqrt(T); empty when unconditioned.
    pub nu: Option<f64>,
    pub w1: f64,
    pub noise_floor: f64,
    pub bound: f64,
    pub bound_eps2: f64,
}

#[derive(Debug, Clone)]
pub struct HighResult {
    pub rows: Vec<Row>,
}

pub struct Settings {
    pub params: BackgroundParams,
    pub dt: f64,
    pub grid: Vec<f64>,
    pub particles: usize,
    pub final_velocities: Option<Vec<f64>>,
    pub bootstrap: usize,
    pub seed: u64,
}

impl Settings {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Settings {
            params: params_or(cfg, 1.0, 0.0, 1.0, 1.0)?,
            dt: cfg.dt.unwrap_or(1.0),
            grid: cfg.collisionality_grid.clone().unwrap_or_else(|| log_grid(10.0, 1000.0, 5)),
            particles: cfg.particles.unwrap_or(400_000),
            final_velocities: cfg.final_velocities.clone(),
            bootstrap: cfg.bootstrap.unwrap_or(20),
            seed: cfg.seed,
        })
    }
}

/// One KD step whose sampled post-collision velocity is pinned to `nu`.
fn kd_pinned(p: &BackgroundParams, dt: f64, nu: f64, r: &mut kdmc_core::RngStream) -> f64 {
    let v0 = sample_maxwellian(p, r);
    let dtau = p.flight_time(0.0, v0, r.standard_exponential());
    if dtau < dt {
        v0 / p.eps * dtau + diffusive_substep(nu, dt - dtau, p, r)
    } else {
        nu / p.eps * dt
    }
}

/// Mean W1 between two resamples of the pooled data: what W1 looks like when
/// both sides come from one law at this sample size.
pub fn bootstrap_floor(a: &[f64], b: &[f64], reps: usize, seed: u64, point: u64) -> Result<f64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = a.len();
    let m = pooled.len() as f64;
    let dists = par_map(reps, |k| {
        let mut r = rng(seed, point, 2, k as u64);
        let mut draw = || -> Vec<f64> {
            (0..n).map(|_| pooled[((r.uniform_open0() * m) as usize).min(pooled.len() - 1)]).collect()
        };
        let x = draw();
        let y = draw();
        w1_empirical(&x, &y).map(|w| w.distance)
    });
    let mut sum = 0.0;
    for d in dists {
        sum += d?;
    }
    Ok(sum / reps as f64)
}

pub fn run(cfg: &ExperimentConfig) -> Result<HighResult> {
    run_with(&Settings::from_config(cfg)?)
}

pub fn run_with(s: &Settings) -> Result<HighResult> {
    let base = s.params;
    let dt = s.dt;
    let nus: Vec<Option<f64>> = match &s.final_velocities {
        Some(v) => v.iter().map(|&c| Some(c)).collect(),
        None => vec![None],
    };
    let mut rows = Vec::new();
    for (ai, &a) in s.grid.iter().enumerate() {
        let p = params_with_eps(&base, eps_for(&base, dt, a))?;
        for (ni, nu) in nus.iter().enumerate() {
            let point = (ai * nus.len() + ni) as u64;
            let (kin, kd): (Vec<f64>, Vec<f64>) = match nu {
                None => {
                    let kin = par_map(s.particles, |i| {
                        let mut r = rng(s.seed, point, 0, i as u64);
                        let st = ParticleState::new(0.0, sample_maxwellian(&p, &mut r), 0.0);
                        simulate_kinetic(&st, dt, &p, &mut r).map(|x| x.final_state.x)
                    });
                    let kd = par_map(s.particles, |i| {
                        let mut r = rng(s.seed, point, 1, i as u64);
                        let st = ParticleState::new(0.0, sample_maxwellian(&p, &mut r), 0.0);
                        simulate_kd(&st, dt, dt, &p, &mut r).map(|x| x.final_state.x)
                    });
                    (
                        kin.into_iter().collect::<std::result::Result<_, _>>()?,
                        kd.into_iter().collect::<std::result::Result<_, _>>()?,
                    )
                }
                Some(c) => {
                    let v = p.eps * p.u + c * p.temperature.sqrt();
                    let kin = par_map(s.particles, |i| {
                        kinetic::conditioned_increment(&p, dt, v, &mut rng(s.seed, point, 0, i as u64)).0
                    });
                    let kd = par_map(s.particles, |i| kd_pinned(&p, dt, v, &mut rng(s.seed, point, 1, i as u64)));
                    (kin, kd)
                }
            };
            let w1 = w1_empirical(&kin, &kd)?.distance;
            let noise_floor = bootstrap_floor(&kin, &kd, s.bootstrap, s.seed, point)?;
            rows.push(Row {
                collisionality: a,
                eps: p.eps,
                nu: *nu,
                w1,
                noise_floor,
                bound: bound_high_collisional(&p, dt, dt).0,
                bound_eps2: high_collisional_eps2(&p, dt),
            });
        }
    }
    Ok(HighResult { rows })
}
