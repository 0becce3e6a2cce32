//! The reference velocity-jump simulation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::params::{sample_maxwellian, BackgroundParams, Medium, ParticleState};
use crate::rng::Draws;

/// One straight flight: how long, at which scaled velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KineticStepRecord {
    pub final_state: ParticleState,
    pub collisions_executed: u64,
    /// Only filled by [`simulate_kinetic_recorded`].
    pub flight_segments: Option<Vec<Segment>>,
}

/// Time to the next collision from `state`.
#[inline]
pub fn sample_collision_time<M: Medium + ?Sized, R: Draws + ?Sized>(
    state: &ParticleState,
    field: &M,
    rng: &mut R,
) -> f64 {
    let e = rng.standard_exponential();
    field.flight_time(state.x, state.v, e)
}

/// Run Algorithm-1 style velocity jumps until `t_end`.
pub fn simulate_kinetic<M: Medium + ?Sized, R: Draws + ?Sized>(
    state: &ParticleState,
    t_end: f64,
    field: &M,
    rng: &mut R,
) -> Result<KineticStepRecord> {
    run(state, t_end, field, rng, None)
}

/// Same as [`simulate_kinetic`] but keeps every flight segment.
pub fn simulate_kinetic_recorded<M: Medium + ?Sized, R: Draws + ?Sized>(
    state: &ParticleState,
    t_end: f64,
    field: &M,
    rng: &mut R,
) -> Result<KineticStepRecord> {
    let mut segs = Vec::new();
    let mut rec = run(state, t_end, field, rng, Some(&mut segs))?;
    rec.flight_segments = Some(segs);
    Ok(rec)
}

#[inline]
fn run<M: Medium + ?Sized, R: Draws + ?Sized>(
    state: &ParticleState,
    t_end: f64,
    field: &M,
    rng: &mut R,
    mut segs: Option<&mut Vec<Segment>>,
) -> Result<KineticStepRecord> {
    if !(t_end >= state.t) {
        return Err(Error::EndBeforeStart { t: state.t, t_end });
    }
    let mut s = *state;
    let mut collisions = 0u64;
    loop {
        let remaining = t_end - s.t;
        if remaining <= 0.0 {
            break;
        }
        let dtau = sample_collision_time(&s, field, rng);
        let eps = field.params_at(s.x).eps;
        if dtau < remaining {
            if let Some(v) = segs.as_deref_mut() {
                v.push(Segment { duration: dtau, v: s.v });
            }
            s.x += s.v / eps * dtau;
            s.t += dtau;
            s.v = sample_maxwellian(field.params_at(s.x), rng);
            collisions += 1;
        } else {
            if let Some(v) = segs.as_deref_mut() {
                v.push(Segment { duration: remaining, v: s.v });
            }
            s.x += s.v / eps * remaining;
            s.t = t_end;
            break;
        }
    }
    Ok(KineticStepRecord { final_state: s, collisions_executed: collisions, flight_segments: None })
}

/// Increment over `dt` of the homogeneous kinetic process whose last flight
/// has velocity `v_final`. Earlier flights draw fresh Maxwellian velocities,
/// and with no collision the whole step flies at `v_final`.
///
/// Returns the increment and the number of collisions.
pub fn conditioned_increment<R: Draws + ?Sized>(
    params: &BackgroundParams,
    dt: f64,
    v_final: f64,
    rng: &mut R,
) -> (f64, u64) {
    let inv_eps = 1.0 / params.eps;
    let mut dx = 0.0;
    let mut t = 0.0;
    let mut k = 0u64;
    loop {
        let remaining = dt - t;
        if remaining <= 0.0 {
            return (dx, k);
        }
        let dtau = params.flight_time(0.0, 0.0, rng.standard_exponential());
        if dtau < remaining {
            let v = sample_maxwellian(params, rng);
            dx += v * inv_eps * dtau;
            t += dtau;
            k += 1;
        } else {
            return (dx + v_final * inv_eps * remaining, k);
        }
    }
}
