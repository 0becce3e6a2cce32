//! Brute-force conditioned kinetic sampling and the exact conditional W1
//! against a Gaussian.

use kdmc_core::kinetic::conditioned_increment;
use kdmc_core::metrics::Accumulator;
use kdmc_core::{sample_maxwellian, BackgroundParams, RngStream};
use statrs::function::erf::{erfc, erfc_inv};

use crate::parallel::{par_accumulate, rng};

/// Sample mean/variance of the kinetic increment over `dt` whose final
/// velocity is pinned to `v_final`, over `n` independent paths.
pub fn oracle_conditioned_increment(
    params: &BackgroundParams,
    dt: f64,
    v_final: f64,
    n: usize,
    seed: u64,
    point: u64,
) -> Accumulator {
    par_accumulate(n, |i| conditioned_increment(params, dt, v_final, &mut rng(seed, point, 0, i as u64)).0)
}

/// Exponential on `[0, span]` at rate `rate`, by inversion.
pub fn truncated_exponential(rate: f64, span: f64, r: &mut RngStream) -> f64 {
    let mass = -(-rate * span).exp_m1();
    let t = -(-r.uniform_open0() * mass).ln_1p() / rate;
    t.min(span)
}

/// One draw from the kinetic increment over `theta` ending at `nu`, given
/// that at least one collision happens inside `theta`.
pub fn conditioned_with_collision(p: &BackgroundParams, theta: f64, nu: f64, r: &mut RngStream) -> f64 {
    let tau = truncated_exponential(p.rate(), theta, r);
    let v1 = sample_maxwellian(p, r);
    v1 / p.eps * tau + conditioned_increment(p, theta - tau, nu, r).0
}

#[inline]
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

#[inline]
fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

#[inline]
fn norm_quantile(p: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p)
}

/// Antiderivative of the normal cdf.
#[inline]
fn big_g(z: f64) -> f64 {
    z * norm_cdf(z) + norm_pdf(z)
}

/// Integral of the normal cdf over `[a, b]`, keeping small values small.
fn int_cdf(a: f64, b: f64) -> f64 {
    if b <= 0.0 {
        big_g(b) - big_g(a)
    } else if a >= 0.0 {
        (b - a) - (big_g(-a) - big_g(-b))
    } else {
        int_cdf(a, 0.0) + int_cdf(0.0, b)
    }
}

/// Integral of |c - cdf(z)| over `[a, b]`; `cc` is 1 - c carried exactly.
fn segment(c: f64, cc: f64, a: f64, b: f64) -> f64 {
    if c > 0.5 {
        return segment(cc, c, -b, -a);
    }
    let len = b - a;
    if c <= 0.0 {
        return int_cdf(a, b);
    }
    if norm_cdf(b) <= c {
        return c * len - int_cdf(a, b);
    }
    if norm_cdf(a) >= c {
        return int_cdf(a, b) - c * len;
    }
    let z = norm_quantile(c).clamp(a, b);
    (c * (z - a) - int_cdf(a, z)) + (int_cdf(z, b) - c * (b - z))
}

/// Exact W1 between a discrete law (`atoms` with `weights` summing to 1) and
/// N(mean, sd^2). Sorts `atoms` together with the weights.
pub fn w1_discrete_vs_normal(atoms: &mut [(f64, f64)], mean: f64, sd: f64) -> f64 {
    if !(sd > 0.0) {
        return atoms.iter().map(|(x, w)| w * (x - mean).abs()).sum();
    }
    for a in atoms.iter_mut() {
        a.0 = (a.0 - mean) / sd;
    }
    atoms.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = atoms.len();
    // mass strictly after atom k, summed from the right
    let mut after = vec![0.0; n];
    for k in (0..n - 1).rev() {
        after[k] = after[k + 1] + atoms[k + 1].1;
    }
    let mut total = big_g(atoms[0].0) + big_g(-atoms[n - 1].0);
    let mut before = 0.0;
    for k in 0..n - 1 {
        before += atoms[k].1;
        let (a, b) = (atoms[k].0, atoms[k + 1].0);
        if b > a {
            total += segment(before, after[k], a, b);
        }
    }
    sd * total
}

/// W1 between the kinetic increment over `theta` ending at `nu` (given one
/// collision already happened at the start) and the KD Gaussian for the same
/// pair. The no-further-collision atom is exact; the rest uses `inner` draws.
pub fn conditional_w1(
    p: &BackgroundParams,
    theta: f64,
    nu: f64,
    inner: usize,
    r: &mut RngStream,
    buf: &mut Vec<(f64, f64)>,
) -> f64 {
    let m = kdmc_core::moments::conditioned(p, theta, nu);
    let stay = (-p.rate() * theta).exp();
    let w = (1.0 - stay) / inner as f64;
    buf.clear();
    buf.push((nu / p.eps * theta, stay));
    for _ in 0..inner {
        buf.push((conditioned_with_collision(p, theta, nu, r), w));
    }
    w1_discrete_vs_normal(buf, m.mean, m.variance.sqrt())
}
