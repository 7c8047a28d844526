//! Closed-form matrices in the raw basis `u_j = ξ^{γ+j} e^{-ξ²/2}`.
//!
//! With `m = γ + j` the operator maps
//!
//! ```text
//! L u_j = [-j(2γ+j) ξ^{m-2} + (2m+2) ξ^m - a ξ^{m-1} + b ξ^{m+1}] e^{-ξ²/2}
//! ```
//!
//! (the `ξ²` potential cancels against the Gaussian), so every matrix element
//! is a combination of the moments `M(p)`.

use nalgebra::DMatrix;

use super::moments::{ln_moment, MomentTable};
use super::solve::{solve_generalized, GeneralizedEigen};
use crate::error::{Error, Result};
use crate::params::ModelParams;

fn check(gamma: f64, size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::invalid("basis size must be at least 1"));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::invalid(format!("gamma must be finite and non-negative, got {gamma}")));
    }
    Ok(())
}

/// `S_ij = M(2γ + i + j + 1)`.
pub fn overlap_matrix(gamma: f64, size: usize) -> Result<DMatrix<f64>> {
    check(gamma, size)?;
    let table = MomentTable::new(2.0 * gamma, 2 * size + 1)?;
    Ok(DMatrix::from_fn(size, size, |i, j| table.at(i + j + 1)))
}

/// `H_ij = ∫ u_i (L u_j) ξ dξ` before symmetrisation. The operator is
/// self-adjoint, so this is symmetric up to rounding.
pub fn hamiltonian_matrix_unsymmetrized(params: &ModelParams, size: usize) -> Result<DMatrix<f64>> {
    params.validate()?;
    check(params.gamma, size)?;
    let g = params.gamma;
    let table = MomentTable::new(2.0 * g, 2 * size + 2)?;
    Ok(DMatrix::from_fn(size, size, |i, j| {
        let jf = j as f64;
        let k = i + j;
        let kinetic = if j == 0 {
            0.0
        } else {
            -jf * (2.0 * g + jf) * table.at(k - 1)
        };
        kinetic + (2.0 * g + 2.0 * jf + 2.0) * table.at(k + 1) - params.a * table.at(k)
            + params.b * table.at(k + 2)
    }))
}

/// `(H + Hᵀ)/2` of [`hamiltonian_matrix_unsymmetrized`].
pub fn hamiltonian_matrix(params: &ModelParams, size: usize) -> Result<DMatrix<f64>> {
    let h = hamiltonian_matrix_unsymmetrized(params, size)?;
    Ok((&h + h.transpose()) * 0.5)
}

/// `H` and `S` for the rescaled basis `u_j / √M(2γ+2j+1)`, which has a unit
/// diagonal overlap. Entries are formed from log-moments so that they stay
/// finite for any size.
pub fn scaled_matrices(params: &ModelParams, size: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    params.validate()?;
    check(params.gamma, size)?;
    let g = params.gamma;
    let ln_norm: Vec<f64> = (0..size)
        .map(|j| 0.5 * ln_moment(2.0 * g + 2.0 * j as f64 + 1.0))
        .collect();
    let ratio = |p: f64, i: usize, j: usize| (ln_moment(p) - ln_norm[i] - ln_norm[j]).exp();
    let s = DMatrix::from_fn(size, size, |i, j| ratio(2.0 * g + (i + j) as f64 + 1.0, i, j));
    let h = DMatrix::from_fn(size, size, |i, j| {
        let jf = j as f64;
        let p = 2.0 * g + (i + j) as f64;
        let kinetic = if j == 0 {
            0.0
        } else {
            -jf * (2.0 * g + jf) * ratio(p - 1.0, i, j)
        };
        kinetic + (2.0 * g + 2.0 * jf + 2.0) * ratio(p + 1.0, i, j) - params.a * ratio(p, i, j)
            + params.b * ratio(p + 2.0, i, j)
    });
    let h = (&h + h.transpose()) * 0.5;
    Ok((h, s))
}

/// Lowest `count` eigenpairs from the rescaled monomial basis of a fixed
/// size. Only usable while the Gram matrix stays positive definite in double
/// precision (roughly `size ≤ 12`); see [`super::spectrum`] for the general
/// route.
pub fn monomial_spectrum(params: &ModelParams, size: usize, count: usize) -> Result<GeneralizedEigen> {
    let (h, s) = scaled_matrices(params, size)?;
    solve_generalized(&h, &s, count)
}
