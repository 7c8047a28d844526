use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const EIGEN_MAX_ITER: usize = 10_000;

/// Lowest eigenpairs of `H c = W S c`, ascending. Vectors are `S`-normalised
/// (`cᵀ S c = 1`).
#[derive(Debug, Clone)]
pub struct GeneralizedEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<f64>>,
}

/// Reduces `H c = W S c` to standard form with `S = L Lᵀ`, diagonalises
/// `L⁻¹ H L⁻ᵀ` and back-transforms the eigenvectors. Each eigenvalue is
/// returned as the Rayleigh quotient of its eigenvector.
pub fn solve_generalized(h: &DMatrix<f64>, s: &DMatrix<f64>, count: usize) -> Result<GeneralizedEigen> {
    let n = h.nrows();
    if h.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::invalid(format!(
            "matrix shapes differ: H is {}x{}, S is {}x{}",
            h.nrows(),
            h.ncols(),
            s.nrows(),
            s.ncols()
        )));
    }
    if count > n {
        return Err(Error::invalid(format!("requested {count} eigenpairs from a {n}x{n} problem")));
    }
    let chol = s.clone().cholesky().ok_or_else(|| Error::IllConditionedBasis {
        size: n,
        condition: condition_estimate(s),
    })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(h)
        .ok_or_else(|| Error::IllConditionedBasis {
            size: n,
            condition: condition_estimate(s),
        })?;
    let a = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::IllConditionedBasis {
            size: n,
            condition: condition_estimate(s),
        })?;
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, EIGEN_MAX_ITER).ok_or(Error::EigenNonConvergence {
        size: n,
        iterations: EIGEN_MAX_ITER,
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &k in order.iter().take(count) {
        let y = eig.eigenvectors.column(k).into_owned();
        let c = lt.solve_upper_triangular(&y).ok_or_else(|| Error::IllConditionedBasis {
            size: n,
            condition: condition_estimate(s),
        })?;
        // The Rayleigh quotient is accurate to the square of the vector
        // error, well below the eigensolver's ε‖H‖.
        let norm2 = c.dot(&(s * &c));
        values.push(c.dot(&(h * &c)) / norm2);
        vectors.push(c / norm2.sqrt());
    }
    Ok(GeneralizedEigen { values, vectors })
}

/// Ratio of extreme eigenvalue magnitudes of a symmetric matrix.
pub fn condition_estimate(s: &DMatrix<f64>) -> f64 {
    let ev = SymmetricEigen::new(s.clone()).eigenvalues;
    let max = ev.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min = ev.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    max / min
}
