//! Evaluatable radial functions `R(ξ)` with norms under the measure `ξ dξ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::radial_integral;
use crate::ritz::OrthoPolys;

const NORM_TOLERANCE: f64 = 1e-14;
const NODE_SAMPLES: usize = 6000;
/// Samples below this fraction of `max |R|` carry no sign information.
const NODE_FLOOR: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RadialForm {
    /// `ξ^γ e^{-bξ/2 - ξ²/2} Σ_j c_j ξ^j`.
    Polynomial { gamma: f64, b: f64, coeffs: Vec<f64> },
    /// `ξ^γ e^{-ξ²/2} Σ_k c_k p_k(ξ)` over orthonormal polynomials.
    Expansion { polys: OrthoPolys, coeffs: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    pub form: RadialForm,
    /// Multiplier applied to the raw form.
    pub scale: f64,
    /// Norm of the raw form, `(∫ R² ξ dξ)^{1/2}`, by quadrature.
    raw_norm: f64,
    cutoff: f64,
}

impl RadialFunction {
    pub fn polynomial(gamma: f64, b: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial factor needs at least one coefficient"));
        }
        Self::with_form(RadialForm::Polynomial { gamma, b, coeffs }, gamma + b.abs() + 12.0)
    }

    pub fn expansion(polys: OrthoPolys, coeffs: Vec<f64>, b: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > polys.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for a basis of {} functions",
                coeffs.len(),
                polys.len()
            )));
        }
        let gamma = polys.gamma;
        let support = 2.0 * (coeffs.len() as f64).sqrt() + 10.0 + gamma.sqrt();
        let cutoff = (gamma + b.abs() + 12.0).max(support);
        Self::with_form(RadialForm::Expansion { polys, coeffs }, cutoff)
    }

    fn with_form(form: RadialForm, cutoff: f64) -> Result<Self> {
        let gamma = match &form {
            RadialForm::Polynomial { gamma, .. } => *gamma,
            RadialForm::Expansion { polys, .. } => polys.gamma,
        };
        if !(gamma >= 0.0) || !cutoff.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite and non-negative, got {gamma}")));
        }
        let mut r = RadialFunction {
            form,
            scale: 1.0,
            raw_norm: 1.0,
            cutoff,
        };
        let norm2 = radial_integral(|x| x * r.raw(x).powi(2), cutoff, NORM_TOLERANCE)?;
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::invalid(format!("radial function has norm² {norm2}")));
        }
        r.raw_norm = norm2.sqrt();
        Ok(r)
    }

    fn raw(&self, x: f64) -> f64 {
        match &self.form {
            RadialForm::Polynomial { gamma, b, coeffs } => {
                let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
                x.powf(*gamma) * (-0.5 * b * x - 0.5 * x * x).exp() * p
            }
            RadialForm::Expansion { polys, coeffs } => {
                x.powf(polys.gamma) * (-0.5 * x * x).exp() * polys.combination(coeffs, x)
            }
        }
    }

    pub fn gamma(&self) -> f64 {
        match &self.form {
            RadialForm::Polynomial { gamma, .. } => *gamma,
            RadialForm::Expansion { polys, .. } => polys.gamma,
        }
    }

    /// Beyond this radius the function is negligible.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.raw(x)
    }

    /// `ξ R(ξ)²`, the radial probability density.
    pub fn density(&self, x: f64) -> f64 {
        x * self.eval(x).powi(2)
    }

    pub fn norm(&self) -> f64 {
        self.scale.abs() * self.raw_norm
    }

    /// Sign of `R` as `ξ → 0⁺`, read off the factor that multiplies `ξ^γ`.
    fn sign_at_origin(&self) -> f64 {
        let leading = match &self.form {
            RadialForm::Polynomial { coeffs, .. } => coeffs.iter().copied().find(|c| *c != 0.0).unwrap_or(1.0),
            RadialForm::Expansion { polys, coeffs } => polys.combination(coeffs, 0.0),
        };
        if leading < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Unit norm under `ξ dξ`, with `R > 0` as `ξ → 0⁺`.
    pub fn normalized(&self) -> RadialFunction {
        RadialFunction {
            scale: self.sign_at_origin() / self.raw_norm,
            ..self.clone()
        }
    }

    /// `∫ f(ξ) R(ξ)² ξ dξ`.
    pub fn integrate_weighted(&self, f: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
        radial_integral(|x| f(x) * self.density(x), self.cutoff, tol)
    }

    /// Sign changes of `R` on `(0, cutoff)`, ignoring the far tail where the
    /// function has decayed below a fixed fraction of its peak.
    pub fn nodes(&self) -> usize {
        let h = self.cutoff / NODE_SAMPLES as f64;
        let samples: Vec<f64> = (1..=NODE_SAMPLES).map(|i| self.eval(i as f64 * h)).collect();
        let peak = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut count = 0;
        let mut last = 0.0;
        for v in samples.into_iter().filter(|v| v.abs() > NODE_FLOOR * peak) {
            if last != 0.0 && v.signum() != last {
                count += 1;
            }
            last = v.signum();
        }
        count
    }
}
