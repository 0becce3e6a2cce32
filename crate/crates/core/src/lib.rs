//! Particle Monte Carlo for the BGK velocity-jump process and its
//! kinetic-diffusion hybrid.
//!
//! Velocities are stored in the scaled form `v`, so the physical speed of a
//! particle is `v / eps`. Everything is dimensionless.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod kd;
pub mod kinetic;
pub mod metrics;
pub mod moments;
pub mod params;
pub mod quadrature;
pub mod rng;

pub use error::{Error, Result};
pub use kd::{diffusive_substep, simulate_kd, simulate_random_walk, KdStepRecord};
pub use kinetic::{sample_collision_time, simulate_kinetic, KineticStepRecord};
pub use metrics::{fit_order, summarize, w1_empirical, EnsembleSummary, W1Result};
pub use moments::StepMoments;
pub use params::{sample_maxwellian, BackgroundParams, Medium, ParticleState, PiecewiseConstantField};
pub use rng::{Draws, RngStream};
