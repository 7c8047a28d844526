//! Dense univariate polynomials with real coefficients and a companion-matrix
//! root finder.

use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Roots whose imaginary part exceeds this fraction of their modulus are
/// treated as complex.
pub const COMPLEX_ROOT_TOLERANCE: f64 = 1e-8;

/// Real roots closer than this (relative) are reported as one root of higher
/// multiplicity, though they are kept separately in the root list.
pub const MULTIPLICITY_TOLERANCE: f64 = 1e-6;

/// A clustered real root of multiplicity `m` comes out of the companion
/// matrix as a tight complex cluster of radius `~ε^{1/m}`. Pairs inside this
/// radius whose real part zeroes the polynomial to rounding level are
/// multiple real roots.
const CLUSTER_RADIUS: f64 = 1e-4;

const NEWTON_MAX_ITER: usize = 60;
const SCHUR_MAX_ITER: usize = 10_000;

/// `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn zero() -> Self {
        Polynomial::constant(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// `Σ |c_k| |x|^k`, the natural scale of rounding errors in `eval(x)`.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or(0.0);
        Polynomial::new((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    /// `self * (c0 + c1 x)`.
    pub fn mul_linear(&self, c0: f64, c1: f64) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c * c0;
            out[k + 1] += c * c1;
        }
        Polynomial::new(out)
    }

    /// Copy with the leading coefficient scaled to one.
    pub fn monic(&self) -> Polynomial {
        self.scale(1.0 / self.leading())
    }

    /// Sum of the roots, `-c_{d-1}/c_d`.
    pub fn vieta_sum(&self) -> f64 {
        let d = self.degree();
        -self.coeffs[d - 1] / self.coeffs[d]
    }

    /// Product of the roots, `(-1)^d c_0/c_d`.
    pub fn vieta_product(&self) -> f64 {
        let d = self.degree();
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.coeffs[0] / self.coeffs[d]
    }

    /// Eigenvalues of the companion matrix of the monic polynomial.
    pub fn companion_roots(&self) -> Result<Vec<(f64, f64)>> {
        let d = self.degree();
        if d == 0 {
            return Ok(Vec::new());
        }
        let monic = self.monic();
        let mut companion = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -monic.coeffs[i];
        }
        let schur = Schur::try_new(companion, f64::EPSILON, SCHUR_MAX_ITER).ok_or_else(|| {
            Error::RootFinding {
                coefficients: self.coeffs.clone(),
            }
        })?;
        Ok(schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
    }

    /// Newton iterations from `x0`; returns the polished root and its residual.
    pub fn polish(&self, x0: f64) -> (f64, f64) {
        let mut x = x0;
        let mut best = (x0, self.eval(x0).abs());
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = self.eval_with_derivative(x);
            if p.abs() < best.1 {
                best = (x, p.abs());
            }
            if p == 0.0 || dp == 0.0 {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        let final_residual = self.eval(x).abs();
        if final_residual < best.1 {
            best = (x, final_residual);
        }
        best
    }

    fn is_rounding_level_zero(&self, x: f64) -> bool {
        let floor = 4.0 * f64::EPSILON * (self.degree() + 1) as f64;
        self.eval(x).abs() <= floor * self.magnitude_at(x)
    }

    /// All real roots, ascending and Newton-polished.
    pub fn real_roots(&self) -> Result<RealRoots> {
        let raw = self.companion_roots()?;
        let mut roots = Vec::new();
        let mut complex = Vec::new();
        for (re, im) in raw {
            let scale = re.hypot(im).max(1.0);
            let on_axis = im.abs() <= COMPLEX_ROOT_TOLERANCE * scale
                || (im.abs() <= CLUSTER_RADIUS * scale && self.is_rounding_level_zero(re));
            if !on_axis {
                complex.push((re, im));
            } else {
                roots.push(re);
            }
        }
        let mut polished: Vec<f64> = roots.iter().map(|&r| self.polish(r).0).collect();
        polished.sort_by(|x, y| x.total_cmp(y));
        let residuals = polished
            .iter()
            .map(|&r| self.eval(r).abs() / self.magnitude_at(r).max(f64::MIN_POSITIVE))
            .collect();
        let multiplicities = multiplicities(&polished);
        Ok(RealRoots {
            roots: polished,
            multiplicities,
            residuals,
            complex,
        })
    }
}

fn multiplicities(sorted: &[f64]) -> Vec<usize> {
    sorted
        .iter()
        .map(|&r| {
            sorted
                .iter()
                .filter(|&&s| (s - r).abs() <= MULTIPLICITY_TOLERANCE * r.abs().max(1.0))
                .count()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRoots {
    /// Ascending.
    pub roots: Vec<f64>,
    /// How many roots (including itself) lie within [`MULTIPLICITY_TOLERANCE`].
    pub multiplicities: Vec<usize>,
    /// `|p(r)| / Σ|c_k||r|^k` after polishing.
    pub residuals: Vec<f64>,
    /// Companion eigenvalues rejected as complex, `(re, im)`.
    pub complex: Vec<(f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn horner_and_derivative() {
        let p = Polynomial::new(vec![1.0, -3.0, 0.0, 2.0]);
        assert_eq!(p.eval(2.0), 1.0 - 6.0 + 16.0);
        let (v, d) = p.eval_with_derivative(2.0);
        assert_eq!(v, 11.0);
        assert_eq!(d, -3.0 + 6.0 * 4.0);
        assert_eq!(p.derivative().coeffs, vec![-3.0, 0.0, 6.0]);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert_eq!(Polynomial::new(vec![]).degree(), 0);
    }

    #[test]
    fn mul_linear_matches_expansion() {
        // (1 + x)(2 - 3x) = 2 - x - 3x²
        let p = Polynomial::new(vec![1.0, 1.0]).mul_linear(2.0, -3.0);
        assert_eq!(p.coeffs, vec![2.0, -1.0, -3.0]);
    }

    #[test]
    fn roots_of_product_of_linears() {
        let roots_in = [-2.5, 0.25, 1.0, 7.0];
        let p = roots_in
            .iter()
            .fold(Polynomial::constant(3.0), |p, &r| p.mul_linear(-r, 1.0));
        let found = p.real_roots().unwrap();
        assert!(found.complex.is_empty());
        for (f, r) in found.roots.iter().zip(roots_in) {
            assert_relative_eq!(*f, r, epsilon = 1e-13);
        }
        assert_relative_eq!(p.vieta_sum(), roots_in.iter().sum::<f64>(), epsilon = 1e-13);
        assert_relative_eq!(
            p.vieta_product(),
            roots_in.iter().product::<f64>(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn complex_pair_is_reported_not_dropped() {
        // (x² + 1)(x - 2)
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]).mul_linear(-2.0, 1.0);
        let found = p.real_roots().unwrap();
        assert_eq!(found.roots.len(), 1);
        assert_relative_eq!(found.roots[0], 2.0, epsilon = 1e-14);
        assert_eq!(found.complex.len(), 2);
    }

    #[test]
    fn double_root_multiplicity() {
        // (x - 1)² (x + 1)
        let p = Polynomial::new(vec![-1.0, 1.0])
            .mul_linear(-1.0, 1.0)
            .mul_linear(1.0, 1.0);
        let found = p.real_roots().unwrap();
        assert_eq!(found.roots.len(), 3);
        assert_eq!(found.multiplicities, vec![1, 2, 2]);
    }
}
