//! Composite Simpson quadrature and the two Gaussian integrals behind the
//! bound constants.

use core::f64::consts::PI;

/// Composite Simpson on `[a, b]` with `n` panels (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Simpson over consecutive pieces, `n` panels each.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: F, cuts: &[f64], n: usize) -> f64 {
    cuts.windows(2).map(|w| simpson(&f, w[0], w[1], n)).sum()
}

#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    libm::exp(-0.5 * x * x) / libm::sqrt(2.0 * PI)
}

const HALF_WIDTH: f64 = 40.0;

/// E sqrt(1 + X^2) for standard normal X.
pub fn sqrt_one_plus_sq(panels: usize) -> f64 {
    simpson(|x| libm::sqrt(x * x + 1.0) * normal_pdf(x), -HALF_WIDTH, HALF_WIDTH, panels)
}

/// E|X^3 - 3X|, the W1 norm of phi(x)(x^4 - 6x^2 + 3). Split at the roots
/// so each piece is smooth.
pub fn hermite4_w1_norm(panels: usize) -> f64 {
    let r = libm::sqrt(3.0);
    simpson_pieces(|x| libm::fabs(x * x * x - 3.0 * x) * normal_pdf(x), &[-HALF_WIDTH, -r, 0.0, r, HALF_WIDTH], panels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCheck {
    pub name: &'static str,
    pub target: f64,
    pub tolerance: f64,
    pub value: f64,
    /// |value at doubled resolution - value|
    pub refinement: f64,
}

impl ConstantCheck {
    pub fn passed(&self) -> bool {
        (self.value - self.target).abs() <= self.tolerance && self.refinement < 1e-6
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsReport {
    pub sqrt_moment: ConstantCheck,
    pub hermite_norm: ConstantCheck,
    /// Fourth-cumulant coefficient; taken as given, no integral defines it.
    pub k4: f64,
}

impl ConstantsReport {
    pub fn passed(&self) -> bool {
        self.sqrt_moment.passed() && self.hermite_norm.passed()
    }
}

fn check(name: &'static str, target: f64, tolerance: f64, f: fn(usize) -> f64, panels: usize) -> ConstantCheck {
    let value = f(panels);
    let fine = f(2 * panels);
    ConstantCheck { name, target, tolerance, value: fine, refinement: (fine - value).abs() }
}

pub fn verify_bound_constants() -> ConstantsReport {
    ConstantsReport {
        sqrt_moment: check("sqrt_one_plus_sq", 1.3545, 5e-4, sqrt_one_plus_sq, 4000),
        hermite_norm: check("hermite4_w1_norm", 1.51, 1e-2, hermite4_w1_norm, 4000),
        k4: 18.3,
    }
}
