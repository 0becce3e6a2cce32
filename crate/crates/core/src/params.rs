use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::Draws;

/// One Monte Carlo particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub x: f64,
    /// Scaled velocity; the particle moves at `v / eps`.
    pub v: f64,
    pub t: f64,
}

impl ParticleState {
    pub fn new(x: f64, v: f64, t: f64) -> Self {
        ParticleState { x, v, t }
    }
}

/// Homogeneous background: collision prefactor, drift, temperature, scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundParams {
    pub sigma: f64,
    pub u: f64,
    pub temperature: f64,
    pub eps: f64,
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams { name, value })
    }
}

impl BackgroundParams {
    pub fn new(sigma: f64, u: f64, temperature: f64, eps: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        positive("temperature", temperature)?;
        positive("eps", eps)?;
        if !u.is_finite() {
            return Err(Error::InvalidParams { name: "u", value: u });
        }
        Ok(BackgroundParams { sigma, u, temperature, eps })
    }

    /// Expected number of collisions in `dt`: sigma dt / eps^2.
    #[inline]
    pub fn collisionality(&self, dt: f64) -> f64 {
        self.sigma * dt / (self.eps * self.eps)
    }

    /// Collision rate sigma / eps^2.
    #[inline]
    pub fn rate(&self) -> f64 {
        self.sigma / (self.eps * self.eps)
    }
}

/// Draw a post-collision velocity: eps u + sqrt(T) z.
#[inline]
pub fn sample_maxwellian<R: Draws + ?Sized>(params: &BackgroundParams, rng: &mut R) -> f64 {
    params.eps * params.u + libm::sqrt(params.temperature) * rng.standard_normal()
}

/// Anything the steppers can query for local parameters.
pub trait Medium {
    fn params_at(&self, x: f64) -> &BackgroundParams;

    /// Flight duration from `x` at scaled velocity `v` that spends the
    /// exponential budget `e` of integrated collision rate.
    fn flight_time(&self, x: f64, v: f64, e: f64) -> f64;
}

impl Medium for BackgroundParams {
    #[inline]
    fn params_at(&self, _x: f64) -> &BackgroundParams {
        self
    }

    #[inline]
    fn flight_time(&self, _x: f64, _v: f64, e: f64) -> f64 {
        e * self.eps * self.eps / self.sigma
    }
}

/// Piecewise-constant background. `breakpoints` are cell edges, so there is
/// one more breakpoint than cells. Positions outside clamp to the end cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstantField {
    breakpoints: Vec<f64>,
    cells: Vec<BackgroundParams>,
}

impl PiecewiseConstantField {
    pub fn new(breakpoints: Vec<f64>, cells: Vec<BackgroundParams>) -> Result<Self> {
        if cells.is_empty() || breakpoints.len() != cells.len() + 1 {
            return Err(Error::InvalidBreakpoints);
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidBreakpoints);
        }
        for c in &cells {
            BackgroundParams::new(c.sigma, c.u, c.temperature, c.eps)?;
        }
        // speed v/eps must not jump at an edge
        if cells.iter().any(|c| c.eps != cells[0].eps) {
            return Err(Error::MixedEps);
        }
        Ok(PiecewiseConstantField { breakpoints, cells })
    }

    pub fn homogeneous(params: BackgroundParams, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo, hi], alloc::vec![params])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn cells(&self) -> &[BackgroundParams] {
        &self.cells
    }

    /// Cell index for `x`, clamped.
    pub fn cell_index(&self, x: f64) -> usize {
        // interior edges only; the outer two just label the domain
        let inner = &self.breakpoints[1..self.breakpoints.len() - 1];
        inner.partition_point(|&b| b <= x)
    }
}

impl Medium for PiecewiseConstantField {
    #[inline]
    fn params_at(&self, x: f64) -> &BackgroundParams {
        &self.cells[self.cell_index(x)]
    }

    fn flight_time(&self, x: f64, v: f64, e: f64) -> f64 {
        let last = self.cells.len() - 1;
        let mut c = self.cell_index(x);
        let mut pos = x;
        let mut budget = e;
        let mut elapsed = 0.0;
        let speed = v / self.cells[0].eps;
        loop {
            let p = &self.cells[c];
            let edge = if speed > 0.0 && c < last {
                Some((self.breakpoints[c + 1], c + 1))
            } else if speed < 0.0 && c > 0 {
                Some((self.breakpoints[c], c - 1))
            } else {
                None
            };
            match edge {
                Some((b, next)) => {
                    let rate = p.rate();
                    let to_edge = (b - pos) / speed;
                    let cost = rate * to_edge;
                    if budget <= cost {
                        return elapsed + p.flight_time(pos, v, budget);
                    }
                    budget -= cost;
                    elapsed += to_edge;
                    pos = b;
                    c = next;
                }
                None => return elapsed + p.flight_time(pos, v, budget),
            }
        }
    }
}
