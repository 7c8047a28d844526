use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{fd_spectrum, GridSpec};
use crate::params::ModelParams;
use crate::ritz::{RitzSolver, SpectrumOptions};

/// Eigenvalues are converged to this fraction of `max(1, a²)`.
const RELATIVE_TOLERANCE: f64 = 1e-8;
const ORACLE_POINTS: usize = 40_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptotePoint {
    pub a: f64,
    pub w: f64,
    /// `r(a) = W_ν (2ν+2γ+1)² / (-a²)`.
    pub ratio: f64,
    pub deviation: f64,
    pub converged: bool,
    /// The same ratio from the finite-difference oracle.
    pub oracle_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub gamma: f64,
    pub b: f64,
    pub nu: usize,
    pub points: Vec<AsymptotePoint>,
    /// `|r - 1|` strictly decreases along the grid.
    pub monotone: bool,
}

/// Oracle box for large `a`: the state shrinks like `1/a` while the
/// harmonic term still confines it at `ξ ~ 8`.
fn oracle_grid(a: f64) -> GridSpec {
    GridSpec {
        xi_max: 8.0 + 40.0 / a.max(1.0),
        num_points: ORACLE_POINTS,
    }
}

/// Compares `W_ν(a)` with the pure Coulomb limit `-a²/(2ν+2γ+1)²`.
pub fn asymptote_check(gamma: f64, b: f64, nu: usize, a_values: &[f64]) -> Result<AsymptoteReport> {
    ModelParams::new(gamma, 0.0, b)?;
    if a_values.is_empty() || a_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("a grid must be non-empty and strictly increasing"));
    }
    if a_values[0] <= 0.0 {
        return Err(Error::invalid("the Coulomb limit needs a > 0"));
    }
    let scale = (2.0 * nu as f64 + 2.0 * gamma + 1.0).powi(2);
    let solver = RitzSolver::new(gamma, SpectrumOptions::new(nu + 1, 1.0).n_max)?;
    let mut points = Vec::with_capacity(a_values.len());
    for &a in a_values {
        let options = SpectrumOptions::new(nu + 1, RELATIVE_TOLERANCE * a.powi(2).max(1.0));
        let s = solver.spectrum(a, b, &options)?;
        let w = s.eigenvalues[nu];
        let ratio = w * scale / (-a * a);
        let fd = fd_spectrum(&ModelParams::new(gamma, a, b)?, &oracle_grid(a), nu + 1)?;
        points.push(AsymptotePoint {
            a,
            w,
            ratio,
            deviation: (ratio - 1.0).abs(),
            converged: s.converged,
            oracle_ratio: fd.eigenvalues[nu] * scale / (-a * a),
        });
    }
    let monotone = points.windows(2).all(|p| p[1].deviation < p[0].deviation);
    Ok(AsymptoteReport {
        gamma,
        b,
        nu,
        points,
        monotone,
    })
}
