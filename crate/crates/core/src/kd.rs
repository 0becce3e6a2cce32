//! Kinetic-diffusion stepping and the limiting random walk.

use crate::error::{Error, Result};
use crate::kinetic::sample_collision_time;
use crate::moments;
use crate::params::{sample_maxwellian, BackgroundParams, Medium, ParticleState};
use crate::rng::Draws;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdStepRecord {
    pub final_state: ParticleState,
    pub collisions_executed: u64,
    pub diffusive_time: f64,
    pub kinetic_time: f64,
}

/// Gaussian increment over `theta` with the moments of the kinetic process
/// conditioned on ending at `v_next`.
#[inline]
pub fn diffusive_substep<R: Draws + ?Sized>(v_next: f64, theta: f64, params: &BackgroundParams, rng: &mut R) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let m = moments::conditioned(params, theta, v_next);
    m.mean + libm::sqrt(m.variance) * rng.standard_normal()
}

/// Number of whole steps of `dt` between `t` and `t_end`.
pub fn step_count(t: f64, dt: f64, t_end: f64) -> Result<u64> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::NonPositiveStep(dt));
    }
    let span = t_end - t;
    if !(span >= 0.0) {
        return Err(Error::EndBeforeStart { t, t_end });
    }
    let n = libm::round(span / dt);
    if (n * dt - span).abs() > 1e-9 * span.max(dt) {
        return Err(Error::MisalignedEnd { span, dt });
    }
    Ok(n as u64)
}

/// Kinetic flight to the first collision of each step, then one diffusive
/// substep filling the rest of the step in which the collision fell.
pub fn simulate_kd<M: Medium + ?Sized, R: Draws + ?Sized>(
    state: &ParticleState,
    dt: f64,
    t_end: f64,
    field: &M,
    rng: &mut R,
) -> Result<KdStepRecord> {
    let n = step_count(state.t, dt, t_end)?;
    let t0 = state.t;
    let mut s = *state;
    let mut k = 0u64;
    let mut rec = KdStepRecord { final_state: s, collisions_executed: 0, diffusive_time: 0.0, kinetic_time: 0.0 };
    while k < n {
        let t_k = if k == 0 { t0 } else { t0 + k as f64 * dt };
        let remaining = t_end - t_k;
        let dtau = sample_collision_time(&s, field, rng);
        let eps = field.params_at(s.x).eps;
        if dtau < remaining {
            s.x += s.v / eps * dtau;
            rec.kinetic_time += dtau;
            // index of the step holding the collision
            let j = (k + libm::floor(dtau / dt) as u64).min(n - 1);
            let theta = ((j - k + 1) as f64 * dt - dtau).clamp(0.0, dt);
            let p = field.params_at(s.x);
            let v_next = sample_maxwellian(p, rng);
            s.x += diffusive_substep(v_next, theta, p, rng);
            rec.diffusive_time += theta;
            s.v = v_next;
            rec.collisions_executed += 1;
            k = j + 1;
        } else {
            s.x += s.v / eps * remaining;
            rec.kinetic_time += remaining;
            k = n;
        }
    }
    s.t = t_end;
    rec.final_state = s;
    Ok(rec)
}

/// Random walk of the diffusion limit: drift u, diffusion T/sigma.
pub fn simulate_random_walk<R: Draws + ?Sized>(
    state: &ParticleState,
    dt: f64,
    t_end: f64,
    params: &BackgroundParams,
    rng: &mut R,
) -> Result<ParticleState> {
    let n = step_count(state.t, dt, t_end)?;
    let drift = params.u * dt;
    let spread = libm::sqrt(2.0 * params.temperature / params.sigma * dt);
    let mut s = *state;
    for _ in 0..n {
        s.x += drift + spread * rng.standard_normal();
    }
    s.t = t_end;
    Ok(s)
}
