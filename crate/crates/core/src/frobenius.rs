//! Power-series solutions `R = ξ^γ e^{-bξ/2-ξ²/2} Σ c_j ξ^j`.
//!
//! Substituting the ansatz into `L R = W R` gives the three-term recurrence
//!
//! ```text
//! c_{j+2} = [b(2γ+2j+3) - 2a] / [2(j+2)(2γ+j+2)] c_{j+1}
//!         + [4(2γ+2j-W+2) - b²] / [4(j+2)(2γ+j+2)] c_j,      c_{-1} = 0, c_0 = 1.
//! ```
//!
//! The series terminates at degree `n` when `W = 2(γ+n+1) - b²/4` and
//! `c_{n+1} = 0`. With `W` fixed that way the `c_j` factor collapses to
//! `2(j-n)/[(j+2)(2γ+j+2)]`, so `c_{n+1}` is a polynomial of degree `n+1`
//! in either `a` or `b`, and its real roots are the models that carry a
//! polynomial solution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::poly::{Polynomial, RealRoots};
use crate::radial::RadialFunction;

/// `c_0..=c_jmax` for a trial eigenvalue `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub params: ModelParams,
    pub w: f64,
    pub c: Vec<f64>,
}

fn denominator(gamma: f64, j: f64) -> f64 {
    (j + 2.0) * (2.0 * gamma + j + 2.0)
}

pub fn series_coefficients(params: &ModelParams, w: f64, jmax: usize) -> Result<SeriesCoefficients> {
    params.validate()?;
    if !w.is_finite() {
        return Err(Error::invalid(format!("W must be finite, got {w}")));
    }
    let ModelParams { gamma, a, b } = *params;
    let mut c = Vec::with_capacity(jmax + 1);
    c.push(1.0);
    let mut prev = 0.0; // c_{j}, starting from c_{-1}
    for k in 1..=jmax {
        // c_k = c_{j+2} with j = k - 2
        let j = k as f64 - 2.0;
        let d = denominator(gamma, j);
        let first = (b * (2.0 * gamma + 2.0 * j + 3.0) - 2.0 * a) / (2.0 * d);
        let second = (4.0 * (2.0 * gamma + 2.0 * j - w + 2.0) - b * b) / (4.0 * d);
        let current = c[k - 1];
        c.push(first * current + second * prev);
        prev = current;
    }
    Ok(SeriesCoefficients { params: *params, w, c })
}

/// `W = 2(γ + n + 1) - b²/4`.
pub fn truncation_energy(n: usize, gamma: f64, b: f64) -> f64 {
    2.0 * (gamma + n as f64 + 1.0) - b * b / 4.0
}

/// Which model parameter the truncation polynomial is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unknown {
    A,
    B,
}

/// `c_{n+1}` as a polynomial in the unknown, with the other parameter fixed
/// and `W` set to the truncation energy. `c_{j+2} = (p + q x) c_{j+1} + r c_j`
/// is run with polynomial-valued `c_j`.
fn truncation_polynomial(n: usize, gamma: f64, fixed: f64, unknown: Unknown) -> Polynomial {
    let mut older = Polynomial::zero();
    let mut newer = Polynomial::constant(1.0);
    for k in 1..=n + 1 {
        let j = k as f64 - 2.0;
        let d = denominator(gamma, j);
        let odd = 2.0 * gamma + 2.0 * j + 3.0;
        let (p, q) = match unknown {
            Unknown::A => (fixed * odd / (2.0 * d), -1.0 / d),
            Unknown::B => (-fixed / d, odd / (2.0 * d)),
        };
        let r = 2.0 * (j - n as f64) / d;
        let next = newer.mul_linear(p, q).add(&older.scale(r));
        older = newer;
        newer = next;
    }
    newer
}

/// `c_{n+1}(a)` at fixed `b`; degree exactly `n + 1`.
pub fn truncation_polynomial_in_a(n: usize, gamma: f64, b: f64) -> Polynomial {
    truncation_polynomial(n, gamma, b, Unknown::A)
}

/// `c_{n+1}(b)` at fixed `a`; degree exactly `n + 1`.
pub fn truncation_polynomial_in_b(n: usize, gamma: f64, a: f64) -> Polynomial {
    truncation_polynomial(n, gamma, a, Unknown::B)
}

/// Real roots of a truncation polynomial, ascending. Complex roots (if any)
/// are listed separately rather than dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub n: usize,
    pub gamma: f64,
    pub unknown: Unknown,
    /// Value of the parameter that was held fixed (`b` when solving for `a`).
    pub fixed: f64,
    pub polynomial: Polynomial,
    pub roots: RealRoots,
}

impl RootSet {
    pub fn values(&self) -> &[f64] {
        &self.roots.roots
    }

    /// `n + 1` minus the number of real roots found.
    pub fn missing(&self) -> usize {
        (self.n + 1).saturating_sub(self.roots.roots.len())
    }

    /// Model parameters for root `i` (0-based).
    pub fn params(&self, i: usize) -> ModelParams {
        let r = self.roots.roots[i];
        match self.unknown {
            Unknown::A => ModelParams {
                gamma: self.gamma,
                a: r,
                b: self.fixed,
            },
            Unknown::B => ModelParams {
                gamma: self.gamma,
                a: self.fixed,
                b: r,
            },
        }
    }
}

fn check_inputs(gamma: f64, fixed: f64) -> Result<()> {
    ModelParams {
        gamma,
        a: fixed,
        b: fixed,
    }
    .validate()
}

pub fn truncation_roots_a(n: usize, gamma: f64, b: f64) -> Result<RootSet> {
    check_inputs(gamma, b)?;
    let polynomial = truncation_polynomial_in_a(n, gamma, b);
    let roots = polynomial.real_roots()?;
    Ok(RootSet {
        n,
        gamma,
        unknown: Unknown::A,
        fixed: b,
        polynomial,
        roots,
    })
}

pub fn truncation_roots_b(n: usize, gamma: f64, a: f64) -> Result<RootSet> {
    check_inputs(gamma, a)?;
    let polynomial = truncation_polynomial_in_b(n, gamma, a);
    let roots = polynomial.real_roots()?;
    Ok(RootSet {
        n,
        gamma,
        unknown: Unknown::B,
        fixed: a,
        polynomial,
        roots,
    })
}

/// One exact polynomial solution: degree `n`, the `root_index`-th root
/// (1-based, ascending) of the truncation polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationSolution {
    pub n: usize,
    pub params: ModelParams,
    pub w: f64,
    pub root_index: usize,
    /// `c_0..=c_n`.
    pub coeffs: Vec<f64>,
}

impl TruncationSolution {
    pub fn from_params(n: usize, params: ModelParams, root_index: usize) -> Result<Self> {
        let w = truncation_energy(n, params.gamma, params.b);
        let series = series_coefficients(&params, w, n)?;
        Ok(TruncationSolution {
            n,
            params,
            w,
            root_index,
            coeffs: series.c,
        })
    }

    /// The polynomial factor `P(ξ)`.
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }

    /// `max_{n<j≤n+extra} |c_j| / max_{j≤n} |c_j|` from continuing the
    /// recurrence; zero for an exact truncation.
    pub fn termination_residual(&self, extra: usize) -> Result<f64> {
        let series = series_coefficients(&self.params, self.w, self.n + extra)?;
        let scale = series.c[..=self.n]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        let tail = series.c[self.n + 1..]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()));
        Ok(tail / scale)
    }

    /// Number of zeros of `P` on `ξ > 0`.
    pub fn positive_nodes(&self) -> Result<usize> {
        let p = self.polynomial();
        if p.degree() == 0 {
            return Ok(0);
        }
        Ok(p.real_roots()?.roots.iter().filter(|&&r| r > 0.0).count())
    }
}

/// All polynomial solutions of degree `n` at fixed `(γ, b)`, one per real
/// root `a^{(i)}`.
pub fn truncation_solutions(n: usize, gamma: f64, b: f64) -> Result<Vec<TruncationSolution>> {
    let set = truncation_roots_a(n, gamma, b)?;
    (0..set.values().len())
        .map(|i| TruncationSolution::from_params(n, set.params(i), i + 1))
        .collect()
}

/// `R(ξ) = ξ^γ e^{-bξ/2-ξ²/2} Σ_{j≤n} c_j ξ^j` with its norm under `ξ dξ`.
pub fn polynomial_radial_function(sol: &TruncationSolution) -> Result<RadialFunction> {
    RadialFunction::polynomial(sol.params.gamma, sol.params.b, sol.coeffs.clone())
}
