//! Finite-difference cross-check of the variational spectrum.
//!
//! The operator is discretised in flux form, `-(1/ξ)(ξ R')' + V R`, on the
//! cell centres `ξ_i = (i - ½) h` of `[0, ξ_max]`. The face at the origin
//! carries zero flux because its weight `ξ` vanishes, which selects the
//! regular solution without any inner cutoff; `R` vanishes one half-cell
//! beyond `ξ_max`. Scaling by `√ξ_i` makes the matrix symmetric tridiagonal:
//!
//! ```text
//! d_i = (ξ_{i-½} + ξ_{i+½}) / (ξ_i h²) + V(ξ_i)
//! e_i = -ξ_{i+½} / (h² √(ξ_i ξ_{i+1}))
//! ```
//!
//! The scheme is second order when `R` is smooth at the origin (integer
//! `γ`); for other `γ` the `ξ^γ` behaviour limits it to lower order.
//! Eigenvalues come from Sturm-count bisection, which is independent of the
//! dense solvers used by the variational route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

const MIN_POINTS: usize = 100;
/// Eigenvalues needing more than this fraction of the grid are unresolved.
const POINTS_PER_EIGENVALUE: usize = 10;
/// Fraction of the box, at its outer end, inspected for leakage.
const EDGE_FRACTION: f64 = 0.05;
/// Eigenvectors with more than this relative amplitude near `ξ_max` feel the
/// wall.
const EDGE_AMPLITUDE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xi_max: f64,
    pub num_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            xi_max: 15.0,
            num_points: 40_000,
        }
    }
}

impl GridSpec {
    pub fn new(xi_max: f64, num_points: usize) -> Result<Self> {
        let grid = GridSpec { xi_max, num_points };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi_max > 0.0) || !self.xi_max.is_finite() {
            return Err(Error::invalid(format!("xi_max must be positive, got {}", self.xi_max)));
        }
        if self.num_points < MIN_POINTS {
            return Err(Error::invalid(format!(
                "grid needs at least {MIN_POINTS} points, got {}",
                self.num_points
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.xi_max / self.num_points as f64
    }

    /// Same step, wider box.
    pub fn extended_to(&self, xi_max: f64) -> GridSpec {
        let num_points = (xi_max / self.step()).round() as usize;
        GridSpec { xi_max, num_points }
    }

    fn centre(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdSpectrum {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub eigenvalues: Vec<f64>,
    /// Whether the eigenvector has non-negligible amplitude near `ξ_max`.
    pub box_contaminated: Vec<bool>,
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    off: Vec<f64>,
}

impl Tridiagonal {
    fn assemble(params: &ModelParams, grid: &GridSpec) -> Self {
        let n = grid.num_points;
        let h = grid.step();
        let h2 = h * h;
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let x = grid.centre(i);
            let left = i as f64 * h;
            let right = (i + 1) as f64 * h;
            diag.push((left + right) / (x * h2) + params.potential(x));
            if i + 1 < n {
                off.push(-right / (h2 * (x * grid.centre(i + 1)).sqrt()));
            }
        }
        Tridiagonal { diag, off }
    }

    /// Number of eigenvalues below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1].powi(2) };
            q = self.diag[i] - lambda - if i == 0 { 0.0 } else { coupling / q };
            if q == 0.0 {
                q = f64::EPSILON * (self.diag[i].abs() + lambda.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to rounding level.
    fn eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for a computed eigenvalue by inverse iteration.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    /// Thomas algorithm for `(T - shift) x = rhs`; tiny pivots are nudged.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - shift;
        for i in 0..n {
            if i > 0 {
                pivot = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            }
            if pivot.abs() < 1e-300 {
                pivot = 1e-300;
            }
            if i + 1 < n {
                c[i] = self.off[i] / pivot;
            }
            d[i] = (rhs[i] - if i > 0 { self.off[i - 1] * d[i - 1] } else { 0.0 }) / pivot;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }
}

/// Lowest `count` eigenvalues of the flux-form finite-difference operator.
pub fn fd_spectrum(params: &ModelParams, grid: &GridSpec, count: usize) -> Result<FdSpectrum> {
    params.validate()?;
    grid.validate()?;
    if count == 0 || count * POINTS_PER_EIGENVALUE > grid.num_points {
        return Err(Error::GridTooCoarse {
            requested: count,
            points: grid.num_points,
        });
    }
    let t = Tridiagonal::assemble(params, grid);
    let (lo, hi) = t.gershgorin();
    let edge_start = ((1.0 - EDGE_FRACTION) * grid.num_points as f64) as usize;
    let mut eigenvalues = Vec::with_capacity(count);
    let mut box_contaminated = Vec::with_capacity(count);
    let mut lower = lo;
    for k in 0..count {
        let w = t.eigenvalue(k, lower, hi);
        let v = t.eigenvector(w);
        let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let edge = v[edge_start..].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        box_contaminated.push(edge > EDGE_AMPLITUDE * peak);
        eigenvalues.push(w);
        lower = lo.max(w - 1e-9 * w.abs().max(1.0)).min(w);
    }
    Ok(FdSpectrum {
        params: *params,
        grid: *grid,
        eigenvalues,
        box_contaminated,
    })
}

/// Observed order `p` from three step sizes `h, h/2, h/4` and their
/// eigenvalues: `p = log2((W_h - W_{h/2}) / (W_{h/2} - W_{h/4}))`.
pub fn observed_order(coarse: f64, medium: f64, fine: f64) -> f64 {
    ((coarse - medium) / (medium - fine)).abs().log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(gamma: f64) -> ModelParams {
        ModelParams::new(gamma, 0.0, 0.0).unwrap()
    }

    #[test]
    fn oscillator_limit() {
        let s = fd_spectrum(&oscillator(0.0), &GridSpec::new(12.0, 12_000).unwrap(), 3).unwrap();
        for (nu, w) in s.eigenvalues.iter().enumerate() {
            assert!((w - 2.0 * (2.0 * nu as f64 + 1.0)).abs() < 1e-5, "ν={nu}: {w}");
        }
        assert!(s.box_contaminated.iter().all(|c| !c));
    }

    #[test]
    fn second_order_convergence() {
        for &gamma in &[0.0, 1.0, 2.0] {
            let w: Vec<f64> = [1000, 2000, 4000]
                .iter()
                .map(|&n| fd_spectrum(&oscillator(gamma), &GridSpec::new(12.0, n).unwrap(), 1).unwrap().eigenvalues[0])
                .collect();
            let p = observed_order(w[0], w[1], w[2]);
            assert!((p - 2.0).abs() < 0.2, "γ={gamma}: order {p}");
            let exact = 2.0 * (gamma + 1.0);
            assert!((w[2] - exact).abs() < (w[1] - exact).abs());
        }
    }

    #[test]
    fn half_integer_gamma_converges_at_first_order() {
        // R ~ ξ^{1/2} is not smooth at the origin.
        let w: Vec<f64> = [1000, 2000, 4000]
            .iter()
            .map(|&n| fd_spectrum(&oscillator(0.5), &GridSpec::new(12.0, n).unwrap(), 1).unwrap().eigenvalues[0])
            .collect();
        let p = observed_order(w[0], w[1], w[2]);
        assert!((p - 1.0).abs() < 0.2, "order {p}");
        assert!((w[2] - 3.0).abs() < 1e-3);
    }

    #[test]
    fn coulomb_ground_state() {
        let p = ModelParams::new(0.0, 2.0, 1.0).unwrap();
        let s = fd_spectrum(&p, &GridSpec::new(15.0, 20_000).unwrap(), 1).unwrap();
        assert!((s.eigenvalues[0] + 3.23052).abs() < 1e-4, "{}", s.eigenvalues[0]);
    }

    #[test]
    fn wider_box_changes_nothing() {
        let p = ModelParams::new(0.0, 2.0, 1.0).unwrap();
        let grid = GridSpec::new(15.0, 6000).unwrap();
        let near = fd_spectrum(&p, &grid, 6).unwrap();
        let far = fd_spectrum(&p, &grid.extended_to(20.0), 6).unwrap();
        for (x, y) in near.eigenvalues.iter().zip(&far.eigenvalues) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn small_box_is_flagged() {
        let s = fd_spectrum(&oscillator(0.0), &GridSpec::new(3.0, 3000).unwrap(), 3).unwrap();
        assert!(s.box_contaminated[2]);
    }

    #[test]
    fn too_many_eigenvalues_rejected() {
        let grid = GridSpec::new(10.0, 100).unwrap();
        assert!(matches!(
            fd_spectrum(&oscillator(0.0), &grid, 11),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(GridSpec::new(10.0, 99).is_err());
        assert!(GridSpec::new(-1.0, 1000).is_err());
    }
}
