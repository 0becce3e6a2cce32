// shared by the integration test files; not every file uses every helper
#![allow(dead_code)]

use kdmc_core::metrics::Accumulator;
use kdmc_core::RngStream;

pub fn stream(seed: u64, i: u64) -> RngStream {
    RngStream::new(seed, i)
}

pub fn accumulate(n: u64, mut f: impl FnMut(u64) -> f64) -> Accumulator {
    let mut acc = Accumulator::new();
    for i in 0..n {
        acc.push(f(i));
    }
    acc
}

/// |got - want| within k standard errors.
pub fn within(got: f64, want: f64, se: f64, k: f64) -> bool {
    (got - want).abs() <= k * se
}
