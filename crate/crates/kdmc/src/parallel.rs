//! Deterministic data-parallel loops. Results never depend on the number of
//! threads: maps collect in index order and reductions merge fixed-size
//! chunks in chunk order.

use kdmc_core::metrics::Accumulator;
use kdmc_core::RngStream;
use rayon::prelude::*;

const CHUNK: usize = 4096;

/// Stream id for particle `i` of sweep point `point` in role `role`
/// (e.g. kinetic vs KD vs bootstrap).
pub fn stream_id(point: u64, role: u64, i: u64) -> u64 {
    debug_assert!(i < 1 << 32 && role < 256);
    (point << 40) | (role << 32) | i
}

pub fn rng(seed: u64, point: u64, role: u64, i: u64) -> RngStream {
    RngStream::new(seed, stream_id(point, role, i))
}

pub fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

pub fn par_accumulate<F>(n: usize, f: F) -> Accumulator
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks: Vec<Accumulator> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Accumulator::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                acc.push(f(i));
            }
            acc
        })
        .collect();
    let mut total = Accumulator::new();
    for c in &chunks {
        total.merge(c);
    }
    total
}

pub fn par_sum_u64<F>(n: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    (0..n).into_par_iter().map(f).sum()
}

/// Run `f` on a pool of `threads` workers (global pool when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build().expect("thread pool").install(f),
        None => f(),
    }
}
