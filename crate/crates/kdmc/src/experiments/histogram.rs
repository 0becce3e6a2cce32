//! Bimodal source, one step: histograms of the three schemes per eps.

use kdmc_core::metrics::{Accumulator, Histogram, HistogramSpec};
use kdmc_core::{
    simulate_kd, simulate_kinetic, simulate_random_walk, w1_empirical, BackgroundParams, ParticleState, RngStream,
};
use serde::Serialize;

use super::{params_or, params_with_eps};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::parallel::{par_map, rng};

/// Long format: histogram bins carry their edges, scalars leave them empty.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub eps: f64,
    pub quantity: &'static str,
    pub bin_lo: Option<f64>,
    pub bin_hi: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsSummary {
    pub eps: f64,
    pub w1_kinetic_kd: f64,
    pub w1_kinetic_rw: f64,
    pub w1_kd_rw: f64,
    pub pooled_std: f64,
}

#[derive(Debug, Clone)]
pub struct HistogramResult {
    pub rows: Vec<Row>,
    pub summaries: Vec<EpsSummary>,
}

fn source_velocity(means: &[f64], std: f64, r: &mut RngStream) -> f64 {
    let k = ((r.uniform_open0() * means.len() as f64) as usize).min(means.len() - 1);
    means[k] + std * kdmc_core::Draws::standard_normal(r)
}

pub fn run(cfg: &ExperimentConfig) -> Result<HistogramResult> {
    let base = params_or(cfg, 1.0, 0.0, 1.0, 1.0)?;
    let eps_grid = cfg.eps_grid.clone().unwrap_or_else(|| vec![0.1, 1.0, 10.0]);
    let n = cfg.particles.unwrap_or(100_000);
    let dt = cfg.dt.unwrap_or(1.0);
    let t_end = cfg.t_end.unwrap_or(dt);
    let means = cfg.source_means.clone().unwrap_or_else(|| vec![-10.0, 10.0]);
    let std = cfg.source_std.unwrap_or(1.0);
    let spec: HistogramSpec = cfg.histogram.map(Into::into).unwrap_or_default();
    let seed = cfg.seed;

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (point, &eps) in eps_grid.iter().enumerate() {
        let p: BackgroundParams = params_with_eps(&base, eps)?;
        let point = point as u64;
        let start = |r: &mut RngStream| ParticleState::new(0.0, source_velocity(&means, std, r), 0.0);
        let kin: Vec<f64> = collect(par_map(n, |i| {
            let mut r = rng(seed, point, 0, i as u64);
            let s = start(&mut r);
            simulate_kinetic(&s, t_end, &p, &mut r).map(|x| x.final_state.x)
        }))?;
        let kd: Vec<f64> = collect(par_map(n, |i| {
            let mut r = rng(seed, point, 1, i as u64);
            let s = start(&mut r);
            simulate_kd(&s, dt, t_end, &p, &mut r).map(|x| x.final_state.x)
        }))?;
        let rw: Vec<f64> = collect(par_map(n, |i| {
            let mut r = rng(seed, point, 2, i as u64);
            let s = start(&mut r);
            simulate_random_walk(&s, dt, t_end, &p, &mut r).map(|x| x.x)
        }))?;

        for (name, xs) in [("count_kinetic", &kin), ("count_kd", &kd), ("count_rw", &rw)] {
            let mut h = Histogram::new(spec)?;
            xs.iter().for_each(|&x| h.add(x));
            let edges = h.edges();
            for (b, &c) in h.counts.iter().enumerate() {
                rows.push(Row {
                    eps,
                    quantity: name,
                    bin_lo: Some(edges[b]),
                    bin_hi: Some(edges[b + 1]),
                    value: c as f64,
                });
            }
        }
        let mut pooled = Accumulator::new();
        pooled.extend(kin.iter().chain(&kd).copied());
        let summary = EpsSummary {
            eps,
            w1_kinetic_kd: w1_empirical(&kin, &kd)?.distance,
            w1_kinetic_rw: w1_empirical(&kin, &rw)?.distance,
            w1_kd_rw: w1_empirical(&kd, &rw)?.distance,
            pooled_std: pooled.variance().sqrt(),
        };
        for (name, v) in [
            ("w1_kinetic_kd", summary.w1_kinetic_kd),
            ("w1_kinetic_rw", summary.w1_kinetic_rw),
            ("w1_kd_rw", summary.w1_kd_rw),
            ("pooled_std", summary.pooled_std),
        ] {
            rows.push(Row { eps, quantity: name, bin_lo: None, bin_hi: None, value: v });
        }
        summaries.push(summary);
    }
    Ok(HistogramResult { rows, summaries })
}

fn collect(v: Vec<kdmc_core::Result<f64>>) -> Result<Vec<f64>> {
    v.into_iter().collect::<std::result::Result<Vec<_>, _>>().map_err(Error::from)
}
