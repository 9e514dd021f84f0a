//! Seeded sampling checks: concavity, Lipschitz bounds, one-sided
//! directional derivatives, non-DC symptoms on the line, convergence and
//! the concave mixing hypotheses.

mod checks;
mod deriv;
mod sampler;

pub use checks::{
    check_comix, check_concave, check_lipschitz, check_onesided_sum, check_onesided_sum_scaled, check_uniform_convergence,
    detect_non_dc_on_line, ComixReport, ComixStatus, DetectorConfig,
};
pub use deriv::{estimate_dir_deriv, estimate_dir_deriv_scaled, onesided_1d, DerivEstimate, DEFAULT_STEPS};
pub use sampler::{Region, Sampler};

use crate::geom::Point;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const IDENTITY_TOL: f64 = 1e-9;
pub const DERIV_TOL: f64 = 1e-6;
pub const LIPSCHITZ_SLACK: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("non-finite value at ({}, {})", .0.x, .0.y)]
    NonFinite(Point),
    #[error("direction ({}, {}) is not a unit vector", .0.x, .0.y)]
    NotUnit(Point),
}

/// Outcome of one sampled check. `pass` holds exactly when
/// `residual <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub residual: f64,
    pub witness: Vec<Point>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, seed: u64, samples: usize, tolerance: f64, residual: f64) -> Self {
        CheckReport {
            name: name.into(),
            seed,
            samples,
            tolerance,
            residual,
            witness: Vec::new(),
            pass: residual <= tolerance,
            metrics: BTreeMap::new(),
        }
    }

    pub fn with_witness(mut self, witness: Vec<Point>) -> Self {
        self.witness = witness;
        self
    }

    pub fn metric(mut self, key: impl Into<String>, value: f64) -> Self {
        self.metrics.insert(key.into(), value);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Tracks the worst residual and its witness across samples.
#[derive(Debug, Clone)]
pub(crate) struct Worst {
    pub residual: f64,
    pub witness: Vec<Point>,
}

impl Worst {
    pub fn new() -> Self {
        Worst { residual: 0.0, witness: Vec::new() }
    }

    pub fn offer(&mut self, residual: f64, witness: &[Point]) {
        // a NaN residual sticks so it surfaces as a failure
        if self.residual.is_nan() {
            return;
        }
        if residual.is_nan() || residual > self.residual || self.witness.is_empty() {
            self.residual = residual;
            self.witness = witness.to_vec();
        }
    }
}
