use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::basis::{OrthoBasis, OrthoPolys};
use super::solve::solve_generalized;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::radial::RadialFunction;

/// Adjacent eigenvalues closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub count: usize,
    /// Stop once every requested eigenvalue moves by less than this between
    /// consecutive basis sizes.
    pub target_tol: f64,
    pub n_step: usize,
    pub n_max: usize,
}

impl SpectrumOptions {
    pub fn new(count: usize, target_tol: f64) -> Self {
        SpectrumOptions {
            count,
            target_tol,
            n_step: 10,
            n_max: 80,
        }
    }

    fn sizes(&self) -> Vec<usize> {
        let first = self.count.div_ceil(self.n_step).max(1) * self.n_step;
        (first..=self.n_max).step_by(self.n_step).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::invalid("count must be at least 1"));
        }
        if !(self.target_tol > 0.0) {
            return Err(Error::invalid(format!("target_tol must be positive, got {}", self.target_tol)));
        }
        if self.n_step == 0 || self.count > self.n_max {
            return Err(Error::invalid(format!(
                "cannot resolve {} eigenvalues with at most {} basis functions",
                self.count, self.n_max
            )));
        }
        Ok(())
    }
}

/// Variational eigenvalues `W_0 ≤ W_1 ≤ …` of one model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub basis_size: usize,
    pub eigenvalues: Vec<f64>,
    /// Coefficients in the orthonormal basis `φ_k`; each vector has unit
    /// norm, so the expanded `R` has unit norm under `ξ dξ`.
    pub coefficient_vectors: Vec<Vec<f64>>,
    /// `|W_ν(N) - W_ν(N - Δ)|` at the final basis size.
    pub convergence: Vec<f64>,
    pub converged: bool,
    /// `‖H c - W S c‖ / ‖H c‖` per eigenpair.
    pub residuals: Vec<f64>,
    /// Indices `ν` with `W_{ν+1} - W_ν < DEGENERACY_GAP`.
    pub degenerate: Vec<usize>,
    /// Eigenvalues at every basis size tried, in order.
    pub history: Vec<(usize, Vec<f64>)>,
    pub polys: OrthoPolys,
}

impl SpectrumResult {
    pub fn radial_function(&self, nu: usize) -> Result<RadialFunction> {
        let coeffs = self
            .coefficient_vectors
            .get(nu)
            .ok_or_else(|| Error::invalid(format!("ν = {nu} not computed")))?;
        RadialFunction::expansion(self.polys.clone(), coeffs.clone(), self.params.b)
    }
}

/// Reusable Rayleigh-Ritz machinery for one `γ`: the basis and the
/// parameter-independent operator pieces are built once, and any `(a, b)`
/// is then a cheap linear combination.
#[derive(Debug, Clone)]
pub struct RitzSolver {
    basis: OrthoBasis,
}

impl RitzSolver {
    pub fn new(gamma: f64, n_max: usize) -> Result<Self> {
        Ok(RitzSolver {
            basis: OrthoBasis::build(gamma, n_max)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.basis.gamma()
    }

    pub fn basis(&self) -> &OrthoBasis {
        &self.basis
    }

    /// Eigenpairs at a single basis size.
    pub fn solve_at(&self, a: f64, b: f64, size: usize, count: usize) -> Result<(Vec<f64>, Vec<DVector<f64>>, Vec<f64>)> {
        if size > self.basis.size() {
            return Err(Error::invalid(format!(
                "basis size {size} exceeds the prepared {}",
                self.basis.size()
            )));
        }
        let m = self.basis.matrices.leading(size);
        let h = m.hamiltonian(a, b);
        let eig = solve_generalized(&h, &m.overlap, count)?;
        let residuals = eig
            .values
            .iter()
            .zip(&eig.vectors)
            .map(|(w, c)| {
                let hc = &h * c;
                let r = &hc - (&m.overlap * c) * *w;
                r.norm() / hc.norm().max(f64::MIN_POSITIVE)
            })
            .collect();
        Ok((eig.values, eig.vectors, residuals))
    }

    pub fn spectrum(&self, a: f64, b: f64, options: &SpectrumOptions) -> Result<SpectrumResult> {
        let params = ModelParams::new(self.gamma(), a, b)?;
        options.validate()?;
        if options.n_max > self.basis.size() {
            return Err(Error::invalid(format!(
                "n_max {} exceeds the prepared basis size {}",
                options.n_max,
                self.basis.size()
            )));
        }
        let mut history: Vec<(usize, Vec<f64>)> = Vec::new();
        let mut last = None;
        let mut converged = false;
        let mut convergence = vec![f64::INFINITY; options.count];
        for size in options.sizes() {
            let (values, vectors, residuals) = self.solve_at(a, b, size, options.count)?;
            if let Some((_, prev)) = history.last() {
                convergence = values
                    .iter()
                    .zip(prev)
                    .map(|(w, p): (&f64, &f64)| (w - p).abs())
                    .collect();
                converged = convergence.iter().all(|&d| d < options.target_tol);
            }
            history.push((size, values.clone()));
            last = Some((size, values, vectors, residuals));
            if converged {
                break;
            }
        }
        let (basis_size, eigenvalues, vectors, residuals) =
            last.expect("at least one basis size is always tried");
        let degenerate = eigenvalues
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] - w[0] < DEGENERACY_GAP)
            .map(|(i, _)| i)
            .collect();
        let mut polys = self.basis.polys.clone();
        polys.alpha.truncate(basis_size);
        polys.beta.truncate(basis_size);
        Ok(SpectrumResult {
            params,
            basis_size,
            eigenvalues,
            coefficient_vectors: vectors.iter().map(|v| v.iter().copied().collect()).collect(),
            convergence,
            converged,
            residuals,
            degenerate,
            history,
            polys,
        })
    }
}

/// Lowest `count` eigenvalues of the operator, enlarging the basis in steps
/// of 10 up to 80 functions until every requested eigenvalue is stable to
/// `target_tol`. An unconverged result is returned with `converged = false`.
pub fn spectrum(params: &ModelParams, count: usize, target_tol: f64) -> Result<SpectrumResult> {
    params.validate()?;
    let options = SpectrumOptions::new(count, target_tol);
    options.validate()?;
    RitzSolver::new(params.gamma, options.n_max)?.spectrum(params.a, params.b, &options)
}
