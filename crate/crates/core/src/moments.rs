//! Closed-form increment moments, their stable kernels, and the error bounds.

use crate::error::{Error, Result};
use crate::params::BackgroundParams;

/// Below this the kernels switch to their Taylor series.
pub const SERIES_CUTOFF: f64 = 1.0;

/// Constant of the low-collisional bound.
pub const LOW_COLLISIONAL_C: f64 = 0.24959;
/// Constant of the high-collisional bound.
pub const HIGH_COLLISIONAL_C: f64 = 0.58;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMoments {
    pub mean: f64,
    pub variance: f64,
}

/// Sum over n >= `start` of `coef(n, 2^n) * a^n / n!`, until terms stop mattering.
#[inline]
fn series(a: f64, start: u32, coef: impl Fn(u32, f64) -> f64) -> f64 {
    let mut term = 1.0;
    let mut pow2 = 1.0;
    for n in 1..start {
        term *= a / n as f64;
        pow2 *= 2.0;
    }
    let mut sum = 0.0;
    for n in start..start + 40 {
        term *= a / n as f64;
        pow2 *= 2.0;
        let c = coef(n, pow2) * term;
        sum += c;
        if c.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// e^{-a} - 1 + a
#[inline]
pub fn expm1_plus(a: f64) -> f64 {
    if a < SERIES_CUTOFF {
        series(a, 2, |n, _| if n % 2 == 0 { 1.0 } else { -1.0 })
    } else {
        libm::expm1(-a) + a
    }
}

/// 1 - e^{-a}
#[inline]
pub fn one_minus_exp(a: f64) -> f64 {
    -libm::expm1(-a)
}

/// 2e^{-a} + a + a e^{-a} - 2
#[inline]
pub fn q_kernel(a: f64) -> f64 {
    if a < SERIES_CUTOFF {
        series(a, 3, |n, _| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s * (2.0 - n as f64)
        })
    } else {
        let e = libm::exp(-a);
        2.0 * e + a + a * e - 2.0
    }
}

/// 1 - 2a e^{-a} - e^{-2a}
#[inline]
pub fn h_kernel(a: f64) -> f64 {
    if a < SERIES_CUTOFF {
        series(a, 3, |n, pow2| {
            let s = if n % 2 == 0 { -1.0 } else { 1.0 };
            s * (pow2 - 2.0 * n as f64)
        })
    } else {
        let e = libm::exp(-a);
        1.0 - 2.0 * a * e - e * e
    }
}

pub fn mean_unconditioned(p: &BackgroundParams, dt: f64) -> f64 {
    p.u * dt
}

pub fn var_unconditioned(p: &BackgroundParams, dt: f64) -> f64 {
    let a = p.collisionality(dt);
    2.0 * p.eps * p.eps / (p.sigma * p.sigma) * p.temperature * expm1_plus(a)
}

pub fn unconditioned(p: &BackgroundParams, dt: f64) -> StepMoments {
    StepMoments { mean: mean_unconditioned(p, dt), variance: var_unconditioned(p, dt) }
}

pub fn mean_conditioned(p: &BackgroundParams, dt: f64, v_final: f64) -> f64 {
    let a = p.collisionality(dt);
    p.u * dt + (v_final - p.eps * p.u) * (p.eps / p.sigma) * one_minus_exp(a)
}

pub fn var_conditioned(p: &BackgroundParams, dt: f64, v_final: f64) -> f64 {
    let a = p.collisionality(dt);
    let r = p.eps / p.sigma;
    let w = v_final - p.eps * p.u;
    let var = 2.0 * p.temperature * r * r * q_kernel(a) + w * w * r * r * h_kernel(a);
    var.max(0.0)
}

/// Mean and variance given the final velocity, sharing one exponential.
#[inline]
pub fn conditioned(p: &BackgroundParams, dt: f64, v_final: f64) -> StepMoments {
    let a = p.collisionality(dt);
    let r = p.eps / p.sigma;
    let w = v_final - p.eps * p.u;
    let (om, q, h) = if a < SERIES_CUTOFF {
        (one_minus_exp(a), q_kernel(a), h_kernel(a))
    } else {
        let e = libm::exp(-a);
        (1.0 - e, 2.0 * e + a + a * e - 2.0, 1.0 - 2.0 * a * e - e * e)
    };
    StepMoments {
        mean: p.u * dt + w * r * om,
        variance: (2.0 * p.temperature * r * r * q + w * w * r * r * h).max(0.0),
    }
}

/// Density of one flight-time overlap given `k` collisions in `[0, dt]`.
pub fn conditional_flighttime_pdf(dtau: f64, k: u32, dt: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroCollisions);
    }
    if !(dt > 0.0) {
        return Err(Error::NonPositiveStep(dt));
    }
    if !(0.0..=dt).contains(&dtau) {
        return Ok(0.0);
    }
    let k = k as f64;
    Ok(k * libm::pow(dt - dtau, k - 1.0) / libm::pow(dt, k))
}

/// Mean dt/(K+1) and second moment 2dt^2/((K+1)(K+2)) of that density.
pub fn conditional_flighttime_moments(k: u32, dt: f64) -> (f64, f64) {
    let k = k as f64;
    (dt / (k + 1.0), 2.0 * dt * dt / ((k + 1.0) * (k + 2.0)))
}

/// Mean and variance of the last flight overlap of a step.
pub fn final_flight_moments(p: &BackgroundParams, dt: f64) -> (f64, f64) {
    let a = p.collisionality(dt);
    let r = p.eps * p.eps / p.sigma;
    (r * one_minus_exp(a), r * r * h_kernel(a))
}

/// Local and total W1 bounds for small sigma dt / eps^2.
pub fn bound_low_collisional(p: &BackgroundParams, dt: f64, t_end: f64) -> (f64, f64) {
    let e8 = libm::pow(p.eps, 8.0);
    let s3 = p.sigma * p.sigma * p.sigma;
    let local = LOW_COLLISIONAL_C * libm::sqrt(p.temperature * s3 * libm::pow(dt, 5.0) / e8);
    let total = LOW_COLLISIONAL_C * t_end * libm::sqrt(p.temperature * s3 * dt * dt * dt / e8);
    (local, total)
}

/// Single-step W1 bound given a collision, the final velocity and the
/// remaining time.
pub fn bound_low_conditioned(p: &BackgroundParams, dt: f64) -> f64 {
    let e4 = libm::pow(p.eps, 4.0);
    LOW_COLLISIONAL_C * libm::sqrt(p.temperature * p.sigma * dt * dt * dt / e4)
}

/// Local and total W1 bounds as eps -> 0.
pub fn bound_high_collisional(p: &BackgroundParams, dt: f64, t_end: f64) -> (f64, f64) {
    let s3 = p.sigma * p.sigma * p.sigma;
    let e3 = p.eps * p.eps * p.eps;
    let local = HIGH_COLLISIONAL_C * libm::sqrt(p.temperature) * e3 / libm::sqrt(s3 * dt);
    let total = HIGH_COLLISIONAL_C * libm::sqrt(p.temperature) * e3 / libm::sqrt(s3 * dt * dt * dt) * t_end;
    (local, total)
}

/// Leading Edgeworth term with the eps power that the fourth cumulant
/// actually carries: 0.58 sqrt(T) eps^2 / sqrt(sigma^3 dt).
pub fn high_collisional_eps2(p: &BackgroundParams, dt: f64) -> f64 {
    let s3 = p.sigma * p.sigma * p.sigma;
    HIGH_COLLISIONAL_C * libm::sqrt(p.temperature) * p.eps * p.eps / libm::sqrt(s3 * dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(sigma: f64, u: f64, t: f64, eps: f64) -> BackgroundParams {
        BackgroundParams::new(sigma, u, t, eps).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn kernel_series_tiny() {
        assert!(rel(expm1_plus(1e-8), 5e-17) < 1e-2);
        assert!(rel(q_kernel(1e-6), 1e-18 / 6.0) < 1e-5);
        assert!(rel(h_kernel(1e-6), 1e-18 / 3.0) < 1e-5);
    }

    #[test]
    fn kernel_branches_agree() {
        // both sides of the cutoff, against the direct formulas where they are safe
        for &a in &[0.5f64, 0.9, 0.999_999, 1.0, 1.2, 3.0] {
            let e = (-a).exp();
            assert!(rel(expm1_plus(a), e - 1.0 + a) < 1e-13, "g1 {a}");
            assert!(rel(q_kernel(a), 2.0 * e + a + a * e - 2.0) < 1e-12, "q {a}");
            assert!(rel(h_kernel(a), 1.0 - 2.0 * a * e - e * e) < 1e-12, "h {a}");
        }
    }

    #[test]
    fn unconditioned_values() {
        let q = p(1.0, 2.0, 1.0, 1.0);
        assert_eq!(mean_unconditioned(&q, 0.5), 1.0);
        assert_eq!(var_unconditioned(&q, 0.0), 0.0);
        assert!(rel(var_unconditioned(&q, 1.0), 2.0 * (-1.0f64).exp()) < 1e-14);
        let d = p(1.0, 0.0, 1.0, 1e-4);
        assert!(rel(var_unconditioned(&d, 1.0), 2.0) < 1e-6);
    }

    #[test]
    fn conditioned_values() {
        let q = p(1.0, 0.0, 1.0, 1.0);
        assert!(rel(mean_conditioned(&q, 1.0, 1.0), 1.0 - (-1.0f64).exp()) < 1e-14);
        let q = p(1.0, 1.5, 1.0, 0.5);
        assert!(rel(mean_conditioned(&q, 2.0, 0.75), 3.0) < 1e-15);
        let d = p(1.0, 0.7, 1.0, 1e-4);
        assert!(rel(mean_conditioned(&d, 1.0, 2.0), 0.7) < 1e-3);
        assert!(rel(var_conditioned(&d, 1.0, 2.0), 2.0) < 1e-6);
        assert_eq!(var_conditioned(&q, 0.0, 3.0), 0.0);
    }

    #[test]
    fn small_dt_cubic() {
        let q = p(1.0, 0.0, 1.0, 1.0);
        let dt = 1e-4;
        let r = var_conditioned(&q, dt, 1.0) / (dt * dt * dt);
        assert!(rel(r, 2.0 / 3.0) < 1e-3, "{r}");
    }

    #[test]
    fn combined_matches_separate() {
        for &a in &[1e-6, 0.3, 1.0, 7.0, 400.0] {
            let q = p(a, 0.4, 0.8, 1.0);
            let m = conditioned(&q, 1.0, -0.9);
            assert!(rel(m.mean, mean_conditioned(&q, 1.0, -0.9)) < 1e-14);
            assert!(rel(m.variance, var_conditioned(&q, 1.0, -0.9)) < 1e-14);
        }
    }

    #[test]
    fn flighttime_pdf() {
        assert_eq!(conditional_flighttime_pdf(0.3, 0, 1.0), Err(Error::ZeroCollisions));
        assert!(rel(conditional_flighttime_pdf(0.3, 1, 2.0).unwrap(), 0.5) < 1e-15);
        assert_eq!(conditional_flighttime_pdf(0.0, 2, 1.0).unwrap(), 2.0);
        assert_eq!(conditional_flighttime_pdf(1.5, 2, 1.0).unwrap(), 0.0);
        let (m, _) = conditional_flighttime_moments(3, 1.0);
        assert_eq!(m, 0.25);
    }

    #[test]
    fn final_flight() {
        let q = p(1.0, 0.0, 1.0, 1.0);
        assert_eq!(final_flight_moments(&q, 0.0), (0.0, 0.0));
        let (m, v) = final_flight_moments(&q, 50.0);
        assert!(rel(m, 1.0) < 1e-15 && rel(v, 1.0) < 1e-15);
    }

    #[test]
    fn bounds() {
        let q = p(1.0, 0.0, 1.0, 1.0);
        let (_, total) = bound_low_collisional(&q, 0.1, 1.0);
        assert!(rel(total, 7.893e-3) < 1e-3);
        let (l2, t2) = bound_low_collisional(&q, 0.05, 1.0);
        let (l1, t1) = bound_low_collisional(&q, 0.1, 1.0);
        assert!(rel(t1 / t2, 2f64.powf(1.5)) < 1e-12);
        assert!(rel(l1 / l2, 2f64.powf(2.5)) < 1e-12);

        let h = p(1.0, 0.0, 1.0, 0.1);
        let (_, total) = bound_high_collisional(&h, 1.0, 1.0);
        assert!(rel(total, 0.58e-3) < 1e-12);
        let h2 = p(1.0, 0.0, 1.0, 0.05);
        let (a, _) = bound_high_collisional(&h, 1.0, 1.0);
        let (b, _) = bound_high_collisional(&h2, 1.0, 1.0);
        assert!(rel(a / b, 8.0) < 1e-12);
    }
}
