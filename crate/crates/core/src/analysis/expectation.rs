use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::radial::RadialFunction;
use crate::ritz::{RitzSolver, SpectrumOptions};

const EXPECTATION_TOLERANCE: f64 = 1e-13;
/// Stencil eigenvectors must overlap the central one at least this much,
/// otherwise the level ordering changed inside the stencil.
const CROSSING_OVERLAP: f64 = 0.9;
const SPECTRUM_TOLERANCE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observable {
    InverseXi,
    Xi,
}

impl Observable {
    fn apply(self, x: f64) -> f64 {
        match self {
            Observable::InverseXi => 1.0 / x,
            Observable::Xi => x,
        }
    }
}

/// `⟨f⟩ = ∫ f R² ξ dξ / ∫ R² ξ dξ`.
pub fn expectation(r: &RadialFunction, observable: Observable) -> Result<f64> {
    let num = r.integrate_weighted(|x| observable.apply(x), EXPECTATION_TOLERANCE)?;
    Ok(num / r.norm().powi(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HellmannFeynmanReport {
    pub params: ModelParams,
    pub nu: usize,
    pub step: f64,
    pub basis_size: usize,
    pub w: f64,
    /// Central difference `(W(a+h) - W(a-h)) / 2h`.
    pub dw_da: f64,
    pub minus_inverse_xi: f64,
    pub dw_db: f64,
    pub plus_xi: f64,
    pub mismatch_a: f64,
    pub mismatch_b: f64,
    /// `∂W/∂a < 0` and `∂W/∂b > 0`.
    pub signs_ok: bool,
    /// A level crossing inside the stencil makes the differences meaningless.
    pub crossing: bool,
}

impl HellmannFeynmanReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.signs_ok && !self.crossing && self.mismatch_a <= tolerance && self.mismatch_b <= tolerance
    }
}

fn relative(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
}

/// Central-difference slopes of `W_ν` in `a` and `b` against the expectation
/// values `-⟨1/ξ⟩` and `⟨ξ⟩` of the eigenfunction. All five spectra use the
/// same basis, so the variational functional is differentiated consistently.
pub fn hellmann_feynman_check(params: &ModelParams, nu: usize, step: f64) -> Result<HellmannFeynmanReport> {
    params.validate()?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    let options = SpectrumOptions::new(nu + 1, SPECTRUM_TOLERANCE);
    let solver = RitzSolver::new(params.gamma, options.n_max)?;
    let centre = solver.spectrum(params.a, params.b, &options)?;
    let size = centre.basis_size;
    let vector = DVector::from_vec(centre.coefficient_vectors[nu].clone());

    let at = |a: f64, b: f64| -> Result<(f64, f64)> {
        let (values, vectors, _) = solver.solve_at(a, b, size, nu + 1)?;
        Ok((values[nu], vectors[nu].dot(&vector).abs()))
    };
    let (a_plus, o1) = at(params.a + step, params.b)?;
    let (a_minus, o2) = at(params.a - step, params.b)?;
    let (b_plus, o3) = at(params.a, params.b + step)?;
    let (b_minus, o4) = at(params.a, params.b - step)?;
    let crossing = [o1, o2, o3, o4].iter().any(|&o| o < CROSSING_OVERLAP);

    let r = centre.radial_function(nu)?;
    let minus_inverse_xi = -expectation(&r, Observable::InverseXi)?;
    let plus_xi = expectation(&r, Observable::Xi)?;
    let dw_da = (a_plus - a_minus) / (2.0 * step);
    let dw_db = (b_plus - b_minus) / (2.0 * step);
    Ok(HellmannFeynmanReport {
        params: *params,
        nu,
        step,
        basis_size: size,
        w: centre.eigenvalues[nu],
        dw_da,
        minus_inverse_xi,
        dw_db,
        plus_xi,
        mismatch_a: relative(dw_da, minus_inverse_xi),
        mismatch_b: relative(dw_db, plus_xi),
        signs_ok: dw_da < 0.0 && dw_db > 0.0,
        crossing,
    })
}
