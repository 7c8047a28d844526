//! Orthonormal basis for `span{ξ^{γ+j} e^{-ξ²/2} : j < N}`.
//!
//! Writing the span as `ξ^γ e^{-ξ²/2} p(ξ)` with `deg p < N`, an orthonormal
//! basis is `φ_k = ξ^γ e^{-ξ²/2} p_k(ξ)` where the `p_k` are orthonormal for
//! the weight `ξ^{2γ+1} e^{-ξ²}` on `(0, ∞)`. Their three-term recurrence is
//! generated by the discretised Stieltjes procedure on a graded composite
//! Gauss-Legendre rule, and all operator matrices are assembled by the same
//! rule. The subspace, and hence every Ritz value, is that of the monomial
//! basis; only the representation changes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::moments::moment;
use crate::error::{Error, Result};
use crate::quadrature::{composite, graded_breakpoints, Rule};

const PANEL_POINTS: usize = 40;
const PANEL_WIDTH: f64 = 0.5;

/// Three-term recurrence of the orthonormal polynomials,
/// `β_{k+1} p_{k+1} = (ξ - α_k) p_k - β_k p_{k-1}`, `p_0 = 1/√M(2γ+1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoPolys {
    pub gamma: f64,
    pub alpha: Vec<f64>,
    /// `beta[0] = 0`; `beta[k]` normalises `p_k`.
    pub beta: Vec<f64>,
    pub p0: f64,
}

impl OrthoPolys {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `p_0(x), …, p_{out.len()-1}(x)`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let n = out.len().min(self.len());
        if n == 0 {
            return;
        }
        out[0] = self.p0;
        let mut prev = 0.0;
        for k in 0..n - 1 {
            let next = ((x - self.alpha[k]) * out[k] - self.beta[k] * prev) / self.beta[k + 1];
            prev = out[k];
            out[k + 1] = next;
        }
    }

    /// `Σ_k c_k p_k(x)`.
    pub fn combination(&self, coeffs: &[f64], x: f64) -> f64 {
        let n = coeffs.len().min(self.len());
        let mut prev = 0.0;
        let mut cur = self.p0;
        let mut sum = 0.0;
        for k in 0..n {
            sum += coeffs[k] * cur;
            if k + 1 < n {
                let next = ((x - self.alpha[k]) * cur - self.beta[k] * prev) / self.beta[k + 1];
                prev = cur;
                cur = next;
            }
        }
        sum
    }
}

/// Operator pieces in the orthonormal basis. With them
/// `H = sym(kinetic) - a·inverse_xi + b·xi` for any `(a, b)`.
#[derive(Debug, Clone)]
pub struct OperatorMatrices {
    /// Should be the identity; kept to carry rounding honestly into the solve.
    pub overlap: DMatrix<f64>,
    /// `⟨φ_i| -d²/dξ² - ξ⁻¹ d/dξ + γ²/ξ² + ξ² |φ_j⟩` from the symmetric
    /// weak form.
    pub kinetic: DMatrix<f64>,
    /// `⟨φ_i| 1/ξ |φ_j⟩`.
    pub inverse_xi: DMatrix<f64>,
    /// `⟨φ_i| ξ |φ_j⟩`.
    pub xi: DMatrix<f64>,
}

impl OperatorMatrices {
    pub fn size(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn hamiltonian(&self, a: f64, b: f64) -> DMatrix<f64> {
        let k = (&self.kinetic + self.kinetic.transpose()) * 0.5;
        k - &self.inverse_xi * a + &self.xi * b
    }

    /// `max |K_ij - K_ji| / max |K_ij|`.
    pub fn kinetic_asymmetry(&self) -> f64 {
        (&self.kinetic - self.kinetic.transpose()).amax() / self.kinetic.amax()
    }

    /// Leading `n × n` blocks; these are the matrices of the first `n` basis
    /// functions.
    pub fn leading(&self, n: usize) -> OperatorMatrices {
        let cut = |m: &DMatrix<f64>| m.view((0, 0), (n, n)).into_owned();
        OperatorMatrices {
            overlap: cut(&self.overlap),
            kinetic: cut(&self.kinetic),
            inverse_xi: cut(&self.inverse_xi),
            xi: cut(&self.xi),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrthoBasis {
    pub polys: OrthoPolys,
    pub matrices: OperatorMatrices,
}

impl OrthoBasis {
    pub fn build(gamma: f64, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::invalid("basis size must be at least 1"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be finite and non-negative, got {gamma}")));
        }
        let rule = quadrature_rule(gamma, size);
        let (polys, tables) = stieltjes(gamma, size, &rule);
        let matrices = assemble(&rule, &tables);
        Ok(OrthoBasis { polys, matrices })
    }

    pub fn size(&self) -> usize {
        self.polys.len()
    }

    pub fn gamma(&self) -> f64 {
        self.polys.gamma
    }
}

/// Polynomials of degree `< size` under `ξ^{2γ+1} e^{-ξ²}` are negligible
/// beyond `2√size + 10`.
fn quadrature_rule(gamma: f64, size: usize) -> Rule {
    let upper = 2.0 * (size as f64).sqrt() + 10.0 + gamma.sqrt();
    composite(&graded_breakpoints(upper, PANEL_WIDTH), PANEL_POINTS)
}

/// `√w_i · p_k(x_i)` and its first two derivatives, rows indexed by `k`.
struct Tables {
    values: DMatrix<f64>,
    first: DMatrix<f64>,
    #[cfg_attr(not(test), allow(dead_code))]
    second: DMatrix<f64>,
}

fn stieltjes(gamma: f64, size: usize, rule: &Rule) -> (OrthoPolys, Tables) {
    let m = rule.len();
    let x = &rule.nodes;
    let sqrt_w: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&xi, &wi)| (0.5 * (wi.ln() + (2.0 * gamma + 1.0) * xi.ln() - xi * xi)).exp())
        .collect();
    let p0 = 1.0 / moment(2.0 * gamma + 1.0).sqrt();

    let mut values = DMatrix::zeros(size, m);
    let mut first = DMatrix::zeros(size, m);
    let mut second = DMatrix::zeros(size, m);
    let mut alpha = Vec::with_capacity(size);
    let mut beta = vec![0.0];

    let mut prev = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let mut cur = (
        sqrt_w.iter().map(|s| s * p0).collect::<Vec<_>>(),
        vec![0.0; m],
        vec![0.0; m],
    );
    for k in 0..size {
        for i in 0..m {
            values[(k, i)] = cur.0[i];
            first[(k, i)] = cur.1[i];
            second[(k, i)] = cur.2[i];
        }
        let a_k: f64 = (0..m).map(|i| x[i] * cur.0[i] * cur.0[i]).sum();
        alpha.push(a_k);
        if k + 1 == size {
            break;
        }
        let b_k = beta[k];
        let mut next = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for i in 0..m {
            let shift = x[i] - a_k;
            next.0[i] = shift * cur.0[i] - b_k * prev.0[i];
            next.1[i] = cur.0[i] + shift * cur.1[i] - b_k * prev.1[i];
            next.2[i] = 2.0 * cur.1[i] + shift * cur.2[i] - b_k * prev.2[i];
        }
        let norm = next.0.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in next.0.iter_mut().chain(next.1.iter_mut()).chain(next.2.iter_mut()) {
            *v /= norm;
        }
        beta.push(norm);
        prev = cur;
        cur = next;
    }
    (
        OrthoPolys {
            gamma,
            alpha,
            beta,
            p0,
        },
        Tables {
            values,
            first,
            second,
        },
    )
}

/// With `φ = ξ^γ e^{-ξ²/2} q`, integrating the derivative terms by parts
/// gives the manifestly symmetric form
///
/// ```text
/// ⟨φ_i|K|φ_j⟩ = ∫ ξ^{2γ+1} e^{-ξ²} [q_i' q_j' - ξ(q_i q_j' + q_i' q_j) + 2ξ² q_i q_j] dξ
/// ```
///
/// which needs only first derivatives.
fn assemble(rule: &Rule, t: &Tables) -> OperatorMatrices {
    let x = &rule.nodes;
    let (n, m) = t.values.shape();
    let over_x = DMatrix::from_fn(n, m, |k, i| t.values[(k, i)] / x[i]);
    let times_x = DMatrix::from_fn(n, m, |k, i| t.values[(k, i)] * x[i]);
    let vt = t.values.transpose();
    let cross = &times_x * t.first.transpose();
    let kinetic = &t.first * t.first.transpose() - &cross - cross.transpose() + (&times_x * times_x.transpose()) * 2.0;
    OperatorMatrices {
        overlap: &t.values * &vt,
        kinetic,
        inverse_xi: &over_x * &vt,
        xi: &times_x * &vt,
    }
}

/// The operator applied directly,
/// `L φ = ξ^γ e^{-ξ²/2} [-q'' - (2γ+1) q'/ξ + 2ξ q' + (2γ+2) q]` for the
/// kinetic and harmonic part, projected on the basis. Agrees with the
/// symmetric form up to quadrature error.
#[cfg(test)]
fn strong_kinetic(gamma: f64, rule: &Rule, t: &Tables) -> DMatrix<f64> {
    let x = &rule.nodes;
    let (n, m) = t.values.shape();
    let image = DMatrix::from_fn(n, m, |k, i| {
        -t.second[(k, i)] - (2.0 * gamma + 1.0) * t.first[(k, i)] / x[i]
            + 2.0 * x[i] * t.first[(k, i)]
            + (2.0 * gamma + 2.0) * t.values[(k, i)]
    });
    &t.values * image.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::ritz::monomial::{monomial_spectrum, overlap_matrix};
    use crate::ritz::solve::solve_generalized;
    use approx::assert_relative_eq;

    #[test]
    fn overlap_is_identity() {
        for &gamma in &[0.0, 0.5, 1.0, 2.0, 0.3] {
            let basis = OrthoBasis::build(gamma, 80).unwrap();
            let dev = (&basis.matrices.overlap - DMatrix::identity(80, 80)).amax();
            assert!(dev < 1e-12, "γ={gamma}: {dev:e}");
            assert!(basis.matrices.overlap.clone().cholesky().is_some());
        }
    }

    #[test]
    fn weak_and_strong_kinetic_forms_agree() {
        for &gamma in &[0.0, 0.5, 1.0, 2.0] {
            let rule = quadrature_rule(gamma, 80);
            let (_, tables) = stieltjes(gamma, 80, &rule);
            let weak = assemble(&rule, &tables).kinetic;
            let strong = strong_kinetic(gamma, &rule, &tables);
            let dev = (&weak - &strong).amax() / weak.amax();
            assert!(dev < 1e-10, "γ={gamma}: {dev:e}");
            assert!((&strong - strong.transpose()).amax() / strong.amax() < 1e-10);
        }
    }

    #[test]
    fn kinetic_is_symmetric() {
        let basis = OrthoBasis::build(0.5, 80).unwrap();
        assert!(basis.matrices.kinetic_asymmetry() < 1e-14);
    }

    #[test]
    fn polynomials_evaluate_consistently() {
        let basis = OrthoBasis::build(0.5, 12).unwrap();
        let mut vals = vec![0.0; 12];
        basis.polys.eval_into(1.3, &mut vals);
        let coeffs: Vec<f64> = (0..12).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let direct: f64 = vals.iter().zip(&coeffs).map(|(p, c)| p * c).sum();
        assert_relative_eq!(basis.polys.combination(&coeffs, 1.3), direct, max_relative = 1e-13);
    }

    #[test]
    fn spans_the_monomial_subspace() {
        // Ritz values depend only on the subspace, so small bases must agree
        // with the closed-form monomial route.
        for &(gamma, a, b) in &[(0.0, 2.0, 1.0), (0.5, -1.0, 0.5), (1.0, 3.0, -1.0)] {
            let params = ModelParams::new(gamma, a, b).unwrap();
            for size in [1, 4, 8] {
                let mono = monomial_spectrum(&params, size, size.min(3)).unwrap();
                let basis = OrthoBasis::build(gamma, size).unwrap();
                let ortho = solve_generalized(
                    &basis.matrices.hamiltonian(a, b),
                    &basis.matrices.overlap,
                    size.min(3),
                )
                .unwrap();
                for (x, y) in mono.values.iter().zip(&ortho.values) {
                    assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "N={size}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn first_function_is_normalised_u0() {
        // φ_0 = u_0 / √S_00
        let basis = OrthoBasis::build(1.0, 3).unwrap();
        let s00 = overlap_matrix(1.0, 1).unwrap()[(0, 0)];
        assert_relative_eq!(basis.polys.p0, 1.0 / s00.sqrt(), epsilon = 1e-14);
    }
}
