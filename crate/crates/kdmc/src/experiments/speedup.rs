//! Executed collisions and wall time of kinetic vs KD across collisionality.

use std::time::Instant;

use kdmc_core::{sample_maxwellian, simulate_kd, simulate_kinetic, BackgroundParams, ParticleState};
use serde::Serialize;

use super::{eps_for, params_or, params_with_eps};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::parallel::{par_sum_u64, rng};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub collisionality: f64,
    pub eps: f64,
    pub steps: u64,
    pub kinetic_collisions: u64,
    pub kd_collisions: u64,
    pub collision_ratio: f64,
    pub analytic_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingRow {
    pub collisionality: f64,
    pub kinetic_seconds: f64,
    pub kd_seconds: f64,
    pub speedup: f64,
}

#[derive(Debug, Clone)]
pub struct SpeedupResult {
    pub rows: Vec<Row>,
    pub timing: Vec<TimingRow>,
}

/// a / (1 - e^{-a}): expected kinetic over KD collisions per step.
pub fn analytic_ratio(a: f64) -> f64 {
    a / -(-a).exp_m1()
}

fn kinetic_pass(p: &BackgroundParams, n: usize, t_end: f64, seed: u64, point: u64) -> Result<u64> {
    let mut total = 0;
    for i in 0..n {
        let mut r = rng(seed, point, 0, i as u64);
        let s = ParticleState::new(0.0, sample_maxwellian(p, &mut r), 0.0);
        total += simulate_kinetic(&s, t_end, p, &mut r)?.collisions_executed;
    }
    Ok(total)
}

fn kd_pass(p: &BackgroundParams, n: usize, dt: f64, t_end: f64, seed: u64, point: u64) -> Result<u64> {
    let mut total = 0;
    for i in 0..n {
        let mut r = rng(seed, point, 1, i as u64);
        let s = ParticleState::new(0.0, sample_maxwellian(p, &mut r), 0.0);
        total += simulate_kd(&s, dt, t_end, p, &mut r)?.collisions_executed;
    }
    Ok(total)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<SpeedupResult> {
    let base = params_or(cfg, 1.0, 0.0, 1.0, 1.0)?;
    let grid = cfg.collisionality_grid.clone().unwrap_or_else(|| vec![0.01, 0.1, 1.0, 10.0, 100.0, 1000.0]);
    let n = cfg.particles.unwrap_or(50_000);
    let dt = cfg.dt.unwrap_or(1.0);
    let reps = cfg.repetitions.unwrap_or(5);
    let min_kd = cfg.min_kd_collisions.unwrap_or(50_000);
    let seed = cfg.seed;

    let mut rows = Vec::new();
    let mut timing = Vec::new();
    for (point, &a) in grid.iter().enumerate() {
        let point = point as u64;
        let p = params_with_eps(&base, eps_for(&base, dt, a))?;
        let per_step = n as f64 * -(-a).exp_m1();
        let steps = ((min_kd as f64 / per_step).ceil() as u64).max(1);
        let t_end = steps as f64 * dt;

        // counts in parallel (deterministic sums), timing sequential
        let kin_count = par_sum_u64(n, |i| {
            let mut r = rng(seed, point, 0, i as u64);
            let s = ParticleState::new(0.0, sample_maxwellian(&p, &mut r), 0.0);
            simulate_kinetic(&s, t_end, &p, &mut r).map(|x| x.collisions_executed).unwrap_or(0)
        });
        let kd_count = par_sum_u64(n, |i| {
            let mut r = rng(seed, point, 1, i as u64);
            let s = ParticleState::new(0.0, sample_maxwellian(&p, &mut r), 0.0);
            simulate_kd(&s, dt, t_end, &p, &mut r).map(|x| x.collisions_executed).unwrap_or(0)
        });

        let mut tk = Vec::with_capacity(reps);
        let mut td = Vec::with_capacity(reps);
        for _ in 0..reps {
            let t0 = Instant::now();
            let c = kinetic_pass(&p, n, t_end, seed, point)?;
            tk.push(t0.elapsed().as_secs_f64());
            debug_assert_eq!(c, kin_count);
            let t0 = Instant::now();
            let c = kd_pass(&p, n, dt, t_end, seed, point)?;
            td.push(t0.elapsed().as_secs_f64());
            debug_assert_eq!(c, kd_count);
        }
        let (ks, ds) = (median(tk), median(td));
        rows.push(Row {
            collisionality: a,
            eps: p.eps,
            steps,
            kinetic_collisions: kin_count,
            kd_collisions: kd_count,
            collision_ratio: kin_count as f64 / kd_count.max(1) as f64,
            analytic_ratio: analytic_ratio(a),
        });
        timing.push(TimingRow { collisionality: a, kinetic_seconds: ks, kd_seconds: ds, speedup: ks / ds });
    }
    Ok(SpeedupResult { rows, timing })
}
