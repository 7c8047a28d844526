//! The bundled verification suite behind `condsolv verify`.
//!
//! Each check yields one or more outcomes with a stable identifier, the
//! measured quantity and the tolerance it was held to. Nothing
//! time-dependent enters the report, so repeated runs are byte-identical.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    asymptote_check, compare_with_polynomial, curve_scan, hellmann_feynman_check, truncation_b_curves, ScanSpec,
};
use crate::error::Result;
use crate::frobenius::{truncation_energy, truncation_roots_a, truncation_solutions};
use crate::io::{format_number, OutputRecord, RecordKind};
use crate::oracle::{fd_spectrum, observed_order, GridSpec};
use crate::params::ModelParams;
use crate::ritz::spectrum;

/// Reference eigenvalues `W_0..W_5` for `γ = 0`, `b = 1`.
pub const REFERENCE_SPECTRA: [(f64, [f64; 6]); 4] = [
    (-1.940551663, [5.75, 9.89404066, 14.06831985, 18.24977457, 22.4306056, 26.60791902]),
    (1.190016441, [-0.1664353619, 5.75, 10.52307155, 15.06421047, 19.4970504, 23.86537389]),
    (2.0, [-3.230518994, 4.510929109, 9.532275968, 14.1972814, 18.70978427, 23.13559322]),
    (5.250535221, [-27.3245988, -0.5108147276, 5.75, 10.90599171, 15.71422948, 20.34858964]),
];
/// Reference `n = 2` truncation roots for `γ = 0`, `b = 1`.
pub const REFERENCE_ROOTS: [f64; 3] = [-1.940551663, 1.190016441, 5.250535221];

const REFERENCE_TOL: f64 = 1e-6;
const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub criterion: u32,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn at_most(id: impl Into<String>, criterion: u32, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckOutcome {
            id: id.into(),
            criterion,
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    fn flag(id: impl Into<String>, criterion: u32, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            id: id.into(),
            criterion,
            passed,
            measured: if passed { 1.0 } else { 0.0 },
            tolerance: 1.0,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub quick: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }

    pub fn criterion_passed(&self, criterion: u32) -> Option<bool> {
        let mut relevant = self.checks.iter().filter(|c| c.criterion == criterion).peekable();
        relevant.peek()?;
        Some(relevant.all(|c| c.passed))
    }

    pub fn to_record(&self) -> OutputRecord {
        let mut r = OutputRecord::new(
            RecordKind::VerifyReport,
            &["check", "criterion", "status", "measured", "tolerance", "detail"],
        );
        r.meta("mode", if self.quick { "quick" } else { "full" })
            .meta("checks", self.checks.len())
            .meta("failed", self.failed_ids().len())
            .meta("status", if self.passed() { "pass" } else { "fail" });
        for c in &self.checks {
            r.push(vec![
                c.id.as_str().into(),
                (c.criterion as usize).into(),
                if c.passed { "pass" } else { "fail" }.into(),
                c.measured.into(),
                c.tolerance.into(),
                c.detail.as_str().into(),
            ])
            .expect("row width matches columns");
        }
        r
    }
}

/// Anything that maps a model to its lowest `count` eigenvalues.
pub type EigenSolver = dyn Fn(&ModelParams, usize) -> Result<Vec<f64>> + Sync;

/// The production solver used by every check.
pub fn ritz_eigenvalues(params: &ModelParams, count: usize) -> Result<Vec<f64>> {
    Ok(spectrum(params, count, SPECTRUM_TOL)?.eigenvalues)
}

fn reference_params(a: f64) -> ModelParams {
    ModelParams { gamma: 0.0, a, b: 1.0 }
}

/// Criterion 1: the 24 reference eigenvalues.
pub fn check_reference_spectra(solver: &EigenSolver) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (set, (a, reference)) in REFERENCE_SPECTRA.iter().enumerate() {
        let w = solver(&reference_params(*a), 6)?;
        for (nu, (x, p)) in w.iter().zip(reference).enumerate() {
            out.push(CheckOutcome::at_most(
                format!("C1.set{}.nu{nu}", set + 1),
                1,
                (x - p).abs(),
                REFERENCE_TOL,
                format!("a={} W={} reference={}", format_number(*a), format_number(*x), format_number(*p)),
            ));
        }
    }
    Ok(out)
}

/// Criterion 2: the `n = 2` truncation roots and their Vieta identities.
pub fn check_truncation() -> Result<Vec<CheckOutcome>> {
    let set = truncation_roots_a(2, 0.0, 1.0)?;
    let roots = set.values();
    let mut out = vec![
        CheckOutcome::at_most("C2.energy", 2, (truncation_energy(2, 0.0, 1.0) - 5.75).abs(), 0.0, "W=5.75"),
        CheckOutcome::flag("C2.count", 2, roots.len() == 3, format!("{} real roots", roots.len())),
    ];
    for (i, (r, p)) in roots.iter().zip(REFERENCE_ROOTS).enumerate() {
        out.push(CheckOutcome::at_most(
            format!("C2.root{}", i + 1),
            2,
            (r - p).abs(),
            1e-8,
            format!("a={}", format_number(*r)),
        ));
    }
    let sum: f64 = roots.iter().sum();
    let product: f64 = roots.iter().product();
    out.push(CheckOutcome::at_most("C2.vieta_sum", 2, (sum - 4.5).abs(), 1e-10, "sum=4.5"));
    out.push(CheckOutcome::at_most(
        "C2.vieta_product",
        2,
        (product + 12.125).abs(),
        1e-10,
        "product=-12.125",
    ));
    Ok(out)
}

/// Criterion 3: 5.75 sits at `ν = i - 1` for root `i` and nowhere else.
pub fn check_placement() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for sol in truncation_solutions(2, 0.0, 1.0)? {
        let w = ritz_eigenvalues(&sol.params, 6)?;
        let nu = sol.root_index - 1;
        out.push(CheckOutcome::at_most(
            format!("C3.root{}.position", sol.root_index),
            3,
            (w[nu] - sol.w).abs(),
            1e-6,
            format!("W_{nu}={}", format_number(w[nu])),
        ));
        let nearest = w
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != nu)
            .map(|(_, x)| (x - sol.w).abs())
            .fold(f64::INFINITY, f64::min);
        out.push(CheckOutcome::flag(
            format!("C3.root{}.isolated", sol.root_index),
            3,
            nearest > 1e-3,
            format!("nearest other eigenvalue at distance {}", format_number(nearest)),
        ));
    }
    Ok(out)
}

/// Criterion 4: the pure oscillator.
pub fn check_oscillator_limit() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for gamma in [0.0, 0.5, 1.0, 2.0] {
        let w = ritz_eigenvalues(&ModelParams { gamma, a: 0.0, b: 0.0 }, 6)?;
        let err = w
            .iter()
            .enumerate()
            .map(|(nu, x)| (x - 2.0 * (2.0 * nu as f64 + gamma + 1.0)).abs())
            .fold(0.0, f64::max);
        out.push(CheckOutcome::at_most(
            format!("C4.gamma{}", format_number(gamma)),
            4,
            err,
            1e-9,
            "max over nu<=5",
        ));
    }
    Ok(out)
}

/// Criterion 5: finite differences against Rayleigh-Ritz, and the order of
/// the finite-difference scheme.
pub fn check_oracle() -> Result<Vec<CheckOutcome>> {
    let grid = GridSpec::default();
    let mut out: Vec<CheckOutcome> = REFERENCE_SPECTRA
        .par_iter()
        .enumerate()
        .map(|(set, (a, _))| -> Result<CheckOutcome> {
            let p = reference_params(*a);
            let ritz = ritz_eigenvalues(&p, 6)?;
            let fd = fd_spectrum(&p, &grid, 6)?;
            let dev = ritz
                .iter()
                .zip(&fd.eigenvalues)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            let walls = fd.box_contaminated.iter().filter(|&&c| c).count();
            Ok(CheckOutcome::at_most(
                format!("C5.set{}", set + 1),
                5,
                dev,
                1e-4,
                format!("a={} max over nu<=5; {walls} box-contaminated", format_number(*a)),
            ))
        })
        .collect::<Result<_>>()?;

    let osc = ModelParams { gamma: 0.0, a: 0.0, b: 0.0 };
    let w: Vec<f64> = [1000, 2000, 4000]
        .iter()
        .map(|&n| Ok(fd_spectrum(&osc, &GridSpec::new(12.0, n)?, 1)?.eigenvalues[0]))
        .collect::<Result<_>>()?;
    let order = observed_order(w[0], w[1], w[2]);
    out.push(CheckOutcome::at_most(
        "C5.order.oscillator",
        5,
        (order - 2.0).abs(),
        0.2,
        format!("observed order {}", format_number(order)),
    ));

    let p = reference_params(2.0);
    let reference = ritz_eigenvalues(&p, 1)?[0];
    let dev: Vec<f64> = [2500, 5000]
        .iter()
        .map(|&n| Ok((fd_spectrum(&p, &GridSpec::new(15.0, n)?, 1)?.eigenvalues[0] - reference).abs()))
        .collect::<Result<_>>()?;
    let order = (dev[0] / dev[1]).log2();
    out.push(CheckOutcome::at_most(
        "C5.order.coulomb",
        5,
        (order - 2.0).abs(),
        0.2,
        format!("observed order {} against the variational value", format_number(order)),
    ));
    Ok(out)
}

/// Criterion 6: Hellmann-Feynman slopes at `(0, 2, 1)`.
pub fn check_hellmann_feynman() -> Result<Vec<CheckOutcome>> {
    let r = hellmann_feynman_check(&reference_params(2.0), 0, 1e-3)?;
    Ok(vec![
        CheckOutcome::at_most(
            "C6.slope_a",
            6,
            r.mismatch_a,
            1e-4,
            format!("dW/da={} -<1/xi>={}", format_number(r.dw_da), format_number(r.minus_inverse_xi)),
        ),
        CheckOutcome::at_most(
            "C6.slope_b",
            6,
            r.mismatch_b,
            1e-4,
            format!("dW/db={} <xi>={}", format_number(r.dw_db), format_number(r.plus_xi)),
        ),
        CheckOutcome::flag("C6.signs", 6, r.signs_ok && !r.crossing, "dW/da<0, dW/db>0, no crossing"),
    ])
}

/// Criterion 7: the Coulomb limit of the ground state.
pub fn check_asymptote() -> Result<Vec<CheckOutcome>> {
    let report = asymptote_check(0.0, 1.0, 0, &[10.0, 20.0, 50.0])?;
    let mut out = Vec::new();
    for (point, bound) in report.points.iter().zip([None, Some(0.02), Some(0.005)]) {
        let oracle_dev = (point.oracle_ratio - 1.0).abs();
        let id = format!("C7.a{}", format_number(point.a));
        let detail = format!(
            "-W0/a^2={} oracle={} converged={}",
            format_number(point.ratio),
            format_number(point.oracle_ratio),
            point.converged
        );
        match bound {
            Some(b) => {
                let mut c = CheckOutcome::at_most(id, 7, point.deviation, b, detail);
                c.passed &= oracle_dev <= b && point.converged;
                out.push(c);
            }
            None => out.push(CheckOutcome::flag(id, 7, point.converged, detail)),
        }
    }
    out.push(CheckOutcome::flag(
        "C7.monotone",
        7,
        report.monotone,
        "deviation decreases over a = 10, 20, 50",
    ));
    Ok(out)
}

/// Criterion 8: variational and polynomial profiles on the `n = 2` roots.
pub fn check_profiles() -> Result<Vec<CheckOutcome>> {
    let grid: Vec<f64> = (0..=800).map(|k| 8.0 * k as f64 / 800.0).collect();
    let mut out = Vec::new();
    for sol in truncation_solutions(2, 0.0, 1.0)? {
        let c = compare_with_polynomial(&sol, &grid)?;
        out.push(CheckOutcome::at_most(
            format!("C8.root{}.sup_norm", sol.root_index),
            8,
            c.sup_norm,
            1e-6,
            "max |xi R_var^2 - xi R_poly^2| on [0, 8]",
        ));
        out.push(CheckOutcome::flag(
            format!("C8.root{}.nodes", sol.root_index),
            8,
            c.variational_nodes == c.nu && c.polynomial_nodes == c.nu,
            format!(
                "expected {} nodes; variational {}, polynomial {}",
                c.nu, c.variational_nodes, c.polynomial_nodes
            ),
        ));
    }
    Ok(out)
}

/// Criterion 9: curve datasets and the overlay conjecture for `n ≤ 4`.
pub fn check_curves() -> Result<Vec<CheckOutcome>> {
    let spec = ScanSpec::new(0.0, 1.0, -30.0, 30.0, 61, 6);
    let scan = curve_scan(&spec)?;
    let mut out: Vec<CheckOutcome> = scan
        .truncation_points
        .iter()
        .map(|p| {
            let mut c = CheckOutcome::at_most(
                format!("C9.n{}.root{}", p.n, p.root_index),
                9,
                p.deviation,
                spec.overlay_tol,
                format!("a={} W={} nu={}", format_number(p.a), format_number(p.w), p.nu),
            );
            c.passed &= p.isolated;
            c
        })
        .collect();
    let expected = (1..=spec.overlay_max_n + 1).sum::<usize>();
    out.push(CheckOutcome::flag(
        "C9.overlay_count",
        9,
        scan.truncation_points.len() == expected,
        format!("{} of {expected} truncation points in range", scan.truncation_points.len()),
    ));
    out.push(CheckOutcome::flag(
        "C9.branches",
        9,
        scan.failures.is_empty() && scan.monotone.iter().all(|&m| m),
        "branches computed and decreasing in a",
    ));
    let curves = truncation_b_curves(2, &[0.0, 0.5, 1.0], -10.0, 10.0, 21)?;
    out.push(CheckOutcome::flag(
        "C9.b_curves",
        9,
        curves.len() == 3 * 3 * 21,
        format!("{} b-curve points, three branches per gamma", curves.len()),
    ));
    Ok(out)
}

type Check = fn() -> Result<Vec<CheckOutcome>>;

fn table1_default() -> Result<Vec<CheckOutcome>> {
    check_reference_spectra(&ritz_eigenvalues)
}

fn run(checks: &[(u32, Check)]) -> Vec<CheckOutcome> {
    checks
        .par_iter()
        .map(|(criterion, check)| {
            check().unwrap_or_else(|e| {
                vec![CheckOutcome::flag(format!("C{criterion}"), *criterion, false, e.to_string())]
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs every check, or only the reference-eigenvalue and oscillator checks when `quick`.
pub fn run_verify(quick: bool) -> VerifyReport {
    let all: [(u32, Check); 9] = [
        (1, table1_default),
        (2, check_truncation),
        (3, check_placement),
        (4, check_oscillator_limit),
        (5, check_oracle),
        (6, check_hellmann_feynman),
        (7, check_asymptote),
        (8, check_profiles),
        (9, check_curves),
    ];
    let selected: Vec<(u32, Check)> = all.into_iter().filter(|(c, _)| !quick || *c == 1 || *c == 4).collect();
    VerifyReport {
        quick,
        checks: run(&selected),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flipped_coulomb_sign_fails_table1() {
        let mutant = |p: &ModelParams, count: usize| ritz_eigenvalues(&p.with_a(-p.a), count);
        let outcomes = check_reference_spectra(&mutant).unwrap();
        assert_eq!(outcomes.len(), 24);
        let failed = outcomes.iter().filter(|c| !c.passed).count();
        assert!(failed >= 20, "only {failed} cells failed");
    }

    #[test]
    fn truncation_and_oscillator_checks_pass() {
        for c in check_truncation().unwrap().into_iter().chain(check_oscillator_limit().unwrap()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn report_record_is_deterministic() {
        let report = VerifyReport {
            quick: true,
            checks: check_truncation().unwrap(),
        };
        let a = report.to_record().to_csv_string().unwrap();
        let b = report.to_record().to_csv_string().unwrap();
        assert_eq!(a, b);
        assert!(a.contains("# status: pass\n"));
        assert_eq!(report.criterion_passed(2), Some(true));
        assert_eq!(report.criterion_passed(3), None);
    }
}
