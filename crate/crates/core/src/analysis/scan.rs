use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{truncation_energy, truncation_roots_a, truncation_roots_b};
use crate::params::ModelParams;
use crate::ritz::{RitzSolver, SpectrumOptions};

/// A second eigenvalue this close to a truncation energy would make the
/// truncation ambiguous.
const ISOLATION_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub gamma: f64,
    pub b: f64,
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
    pub branches: usize,
    /// Truncation points of degree `0..=overlay_max_n` are overlaid.
    pub overlay_max_n: usize,
    pub target_tol: f64,
    /// Distance from the branch allowed for an overlay point.
    pub overlay_tol: f64,
}

impl ScanSpec {
    pub fn new(gamma: f64, b: f64, a_min: f64, a_max: f64, points: usize, branches: usize) -> Self {
        ScanSpec {
            gamma,
            b,
            a_min,
            a_max,
            points,
            branches,
            overlay_max_n: 4,
            target_tol: 1e-10,
            overlay_tol: 1e-6,
        }
    }

    pub fn a_values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.a_min];
        }
        let h = (self.a_max - self.a_min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.a_min + h * i as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        ModelParams::new(self.gamma, self.a_min, self.b)?;
        ModelParams::new(self.gamma, self.a_max, self.b)?;
        if self.points == 0 || (self.points > 1 && self.a_max <= self.a_min) {
            return Err(Error::invalid(format!(
                "scan needs a_max > a_min and at least one point, got [{}, {}] with {}",
                self.a_min, self.a_max, self.points
            )));
        }
        if self.branches == 0 {
            return Err(Error::invalid("scan needs at least one branch"));
        }
        Ok(())
    }
}

/// One truncation solution placed against the variational spectrum of its
/// own model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayPoint {
    pub n: usize,
    /// 1-based root index; the conjectured branch is `ν = root_index - 1`.
    pub root_index: usize,
    pub a: f64,
    pub w: f64,
    pub nu: usize,
    pub branch_w: f64,
    pub deviation: f64,
    /// Distance from `w` to the nearest other eigenvalue.
    pub nearest_other: f64,
    pub on_branch: bool,
    pub isolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveScan {
    pub spec: ScanSpec,
    pub a_values: Vec<f64>,
    /// `branches[ν][k] = W_ν(a_k)`, `None` where the solver failed.
    pub branches: Vec<Vec<Option<f64>>>,
    /// Grid indices where the solver failed or did not converge, with the
    /// reason.
    pub failures: Vec<(usize, String)>,
    pub truncation_points: Vec<OverlayPoint>,
    /// Per branch: strictly decreasing in `a` over the successful points.
    pub monotone: Vec<bool>,
}

impl CurveScan {
    pub fn overlay_ok(&self) -> bool {
        self.truncation_points.iter().all(|p| p.on_branch && p.isolated)
    }

    pub fn failure_fraction(&self) -> f64 {
        self.failures.len() as f64 / self.a_values.len() as f64
    }
}

/// `W_ν(a)` for `ν < branches` on a uniform grid, computed in parallel, plus
/// the truncation points of degree `n ≤ overlay_max_n` with `a` in range
/// checked against branch `ν = i - 1`.
pub fn curve_scan(spec: &ScanSpec) -> Result<CurveScan> {
    spec.validate()?;
    let count = spec.branches.max(spec.overlay_max_n + 2);
    let options = SpectrumOptions::new(count, spec.target_tol);
    let solver = RitzSolver::new(spec.gamma, options.n_max)?;
    let a_values = spec.a_values();

    let results: Vec<Result<(Vec<f64>, bool)>> = a_values
        .par_iter()
        .map(|&a| {
            solver
                .spectrum(a, spec.b, &options)
                .map(|s| (s.eigenvalues, s.converged))
        })
        .collect();

    let mut branches = vec![Vec::with_capacity(a_values.len()); spec.branches];
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok((values, converged)) => {
                if !converged {
                    failures.push((k, "spectrum not converged".to_string()));
                }
                for (nu, branch) in branches.iter_mut().enumerate() {
                    branch.push(Some(values[nu]));
                }
            }
            Err(e) => {
                failures.push((k, e.to_string()));
                for branch in branches.iter_mut() {
                    branch.push(None);
                }
            }
        }
    }
    let monotone = branches
        .iter()
        .map(|b| {
            let vals: Vec<f64> = b.iter().flatten().copied().collect();
            vals.windows(2).all(|w| w[1] < w[0])
        })
        .collect();

    let mut candidates = Vec::new();
    for n in 0..=spec.overlay_max_n {
        let set = truncation_roots_a(n, spec.gamma, spec.b)?;
        for (i, &a) in set.values().iter().enumerate() {
            if a >= spec.a_min && a <= spec.a_max {
                candidates.push((n, i + 1, a));
            }
        }
    }
    let truncation_points = candidates
        .par_iter()
        .map(|&(n, root_index, a)| overlay_point(&solver, &options, spec, n, root_index, a))
        .collect::<Result<Vec<_>>>()?;

    Ok(CurveScan {
        spec: *spec,
        a_values,
        branches,
        failures,
        truncation_points,
        monotone,
    })
}

fn overlay_point(
    solver: &RitzSolver,
    options: &SpectrumOptions,
    spec: &ScanSpec,
    n: usize,
    root_index: usize,
    a: f64,
) -> Result<OverlayPoint> {
    let w = truncation_energy(n, spec.gamma, spec.b);
    let nu = root_index - 1;
    let s = solver.spectrum(a, spec.b, options)?;
    let branch_w = s.eigenvalues[nu];
    let deviation = (branch_w - w).abs();
    let nearest_other = s
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != nu)
        .map(|(_, v)| (v - w).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(OverlayPoint {
        n,
        root_index,
        a,
        w,
        nu,
        branch_w,
        deviation,
        nearest_other,
        on_branch: deviation <= spec.overlay_tol,
        isolated: nearest_other > ISOLATION_GAP,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BCurvePoint {
    pub gamma: f64,
    pub a: f64,
    /// 1-based, ascending in `b` at this `a`.
    pub root_index: usize,
    pub b: f64,
}

/// Truncation curves `b_{n,γ}^{(i)}(a)`: the real roots in `b` of the
/// degree-`n` truncation condition at each `a` of a uniform grid.
pub fn truncation_b_curves(n: usize, gammas: &[f64], a_min: f64, a_max: f64, points: usize) -> Result<Vec<BCurvePoint>> {
    if points < 2 || !(a_max > a_min) {
        return Err(Error::invalid("b-curve grid needs a_max > a_min and at least two points"));
    }
    let h = (a_max - a_min) / (points - 1) as f64;
    let mut out = Vec::new();
    for &gamma in gammas {
        for k in 0..points {
            let a = a_min + h * k as f64;
            let set = truncation_roots_b(n, gamma, a)?;
            out.extend(set.values().iter().enumerate().map(|(i, &b)| BCurvePoint {
                gamma,
                a,
                root_index: i + 1,
                b,
            }));
        }
    }
    Ok(out)
}
