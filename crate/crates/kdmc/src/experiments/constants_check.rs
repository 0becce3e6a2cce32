//! Quadrature of the Gaussian integrals behind the bound constants.

use kdmc_core::quadrature::{verify_bound_constants, ConstantCheck};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub target: f64,
    pub tolerance: f64,
    pub value: f64,
    pub refinement: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ConstantsResult {
    pub rows: Vec<Row>,
    pub k4: f64,
}

impl ConstantsResult {
    pub fn failures(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{}: {} vs {} ± {}", r.name, r.value, r.target, r.tolerance))
            .collect()
    }
}

fn row(c: ConstantCheck) -> Row {
    Row {
        name: c.name,
        target: c.target,
        tolerance: c.tolerance,
        value: c.value,
        refinement: c.refinement,
        pass: c.passed(),
    }
}

pub fn run(_cfg: &ExperimentConfig) -> Result<ConstantsResult> {
    let r = verify_bound_constants();
    Ok(ConstantsResult { rows: vec![row(r.sqrt_moment), row(r.hermite_norm)], k4: r.k4 })
}
