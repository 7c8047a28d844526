//! Acceptance criteria, one line each. Every criterion runs to completion
//! regardless of earlier failures; the process exits nonzero if any failed.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use condsolv::analysis::{asymptote_check, compare_with_polynomial, hellmann_feynman_check};
use condsolv::io::{Cell, OutputRecord};
use condsolv::{fd_spectrum, spectrum, truncation_roots_a, truncation_solutions, GridSpec, ModelParams};

/// Reference values of the first six eigenvalues for `γ = 0`, `b = 1`.
const REFERENCE_SPECTRA: [(f64, [f64; 6]); 4] = [
    (-1.940551663, [5.75, 9.89404066, 14.06831985, 18.24977457, 22.4306056, 26.60791902]),
    (1.190016441, [-0.1664353619, 5.75, 10.52307155, 15.06421047, 19.4970504, 23.86537389]),
    (2.0, [-3.230518994, 4.510929109, 9.532275968, 14.1972814, 18.70978427, 23.13559322]),
    (5.250535221, [-27.3245988, -0.5108147276, 5.75, 10.90599171, 15.71422948, 20.34858964]),
];
const REFERENCE_ROOTS: [f64; 3] = [-1.940551663, 1.190016441, 5.250535221];

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    passed: bool,
    summary: String,
}

fn verdict(passed: bool, summary: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        summary: summary.into(),
    }
}

fn condsolv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condsolv"))
        .args(args)
        .output()
        .expect("condsolv binary runs")
}

fn record_from(output: &Output) -> OutputRecord {
    let text = String::from_utf8(output.stdout.clone()).expect("utf-8 output");
    if text.trim_start().starts_with('{') {
        OutputRecord::parse_json(&text).expect("valid json record")
    } else {
        OutputRecord::parse_csv(&text).expect("valid csv record")
    }
}

fn params(gamma: f64, a: f64, b: f64) -> ModelParams {
    ModelParams::new(gamma, a, b).unwrap()
}

fn c1_reference_spectra() -> Verdict {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0, 0, 0.0);
    let mut bad = Vec::new();
    for (a, reference) in REFERENCE_SPECTRA {
        let a_text = a.to_string();
        let out = condsolv(&["spectrum", "--gamma", "0", "--a", &a_text, "--b", "1", "--count", "6", "--format", "json"]);
        if !out.status.success() {
            return verdict(false, format!("spectrum at a={a} exited with {}", out.status));
        }
        let w = record_from(&out).numeric_column("w").unwrap();
        for (nu, (x, p)) in w.iter().zip(reference).enumerate() {
            let err = (x - p).abs();
            if err > worst.0 {
                worst = (err, a, nu, *x);
            }
            if err > 1e-6 {
                bad.push(format!("a={a} nu={nu}: {x} vs reference {p} (|dW|={err:.2e})"));
            }
        }
    }
    let elapsed = start.elapsed();
    let mut summary = format!(
        "reference eigenvalues, 24 at 1e-6: {}/24 within tolerance, max |dW| = {:.2e} (a={}, nu={}); runtime {:.2} s",
        24 - bad.len(),
        worst.0,
        worst.1,
        worst.2,
        elapsed.as_secs_f64()
    );
    if !bad.is_empty() {
        summary.push_str(&format!("; outside: {}", bad.join("; ")));
        // Independent estimate of the disputed cell: Richardson-extrapolated
        // finite differences.
        let p = params(0.0, worst.1, 1.0);
        let fd: Vec<f64> = [20_000, 40_000, 80_000]
            .iter()
            .map(|&n| fd_spectrum(&p, &GridSpec::new(15.0, n).unwrap(), worst.2 + 1).unwrap().eigenvalues[worst.2])
            .collect();
        let extrapolated = (4.0 * fd[2] - fd[1]) / 3.0;
        summary.push_str(&format!(
            "; extrapolated finite-difference value {extrapolated:.9} agrees with the computed one to {:.1e}",
            (extrapolated - worst.3).abs()
        ));
    }
    verdict(bad.is_empty() && elapsed <= Duration::from_secs(30), summary)
}

fn c2_truncation() -> Verdict {
    let out = condsolv(&["truncate", "--n", "2", "--gamma", "0", "--b", "1"]);
    let record = record_from(&out);
    let w = record.numeric_column("w").unwrap();
    let a = record.numeric_column("a").unwrap();
    let set = truncation_roots_a(2, 0.0, 1.0).unwrap();
    let roots = set.values();
    let sum: f64 = roots.iter().sum();
    let product: f64 = roots.iter().product();
    let root_err = roots
        .iter()
        .zip(REFERENCE_ROOTS)
        .map(|(r, t)| (r - t).abs())
        .fold(0.0, f64::max);
    let printed_err = a.iter().zip(REFERENCE_ROOTS).map(|(r, t)| (r - t).abs()).fold(0.0, f64::max);
    let passed = out.status.success()
        && w.len() == 3
        && w.iter().all(|&x| x == 5.75)
        && roots.len() == 3
        && root_err <= 1e-8
        && printed_err <= 1e-8
        && (sum - 4.5).abs() <= 1e-10
        && (product + 12.125).abs() <= 1e-10;
    verdict(
        passed,
        format!(
            "W = {:?}, roots within {root_err:.1e} of the reference ones, sum = {sum} (|d| {:.1e}), product = {product} (|d| {:.1e})",
            w,
            (sum - 4.5).abs(),
            (product + 12.125).abs()
        ),
    )
}

fn c3_placement() -> Verdict {
    let mut lines = Vec::new();
    let mut passed = true;
    for sol in truncation_solutions(2, 0.0, 1.0).unwrap() {
        let s = spectrum(&sol.params, 6, 1e-10).unwrap();
        let nu = sol.root_index - 1;
        let position = (s.eigenvalues[nu] - 5.75).abs();
        let nearest = s
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != nu)
            .map(|(_, w)| (w - 5.75).abs())
            .fold(f64::INFINITY, f64::min);
        passed &= position <= 1e-6 && nearest > 1e-3;
        lines.push(format!("root {} -> nu={nu} (|dW| {position:.1e}, nearest other {nearest:.3})", sol.root_index));
    }
    verdict(passed, lines.join(", "))
}

fn c4_oscillator() -> Verdict {
    let mut worst = 0.0f64;
    for gamma in [0.0, 0.5, 1.0, 2.0] {
        let s = spectrum(&params(gamma, 0.0, 0.0), 6, 1e-12).unwrap();
        for (nu, w) in s.eigenvalues.iter().enumerate() {
            worst = worst.max((w - 2.0 * (2.0 * nu as f64 + gamma + 1.0)).abs());
        }
    }
    verdict(worst <= 1e-9, format!("a=b=0, nu<=5, gamma in {{0, 1/2, 1, 2}}: max |W - 2(2nu+gamma+1)| = {worst:.1e}"))
}

fn c5_oracle() -> Verdict {
    let mut worst = 0.0f64;
    for (a, _) in REFERENCE_SPECTRA {
        let p = params(0.0, a, 1.0);
        let ritz = spectrum(&p, 6, 1e-10).unwrap();
        let fd = fd_spectrum(&p, &GridSpec::default(), 6).unwrap();
        for (x, y) in ritz.eigenvalues.iter().zip(&fd.eigenvalues) {
            worst = worst.max((x - y).abs());
        }
    }
    // Observed order from three successively halved grids on a reference model,
    // measured against the variational value.
    let p = params(0.0, 2.0, 1.0);
    let reference = spectrum(&p, 1, 1e-12).unwrap().eigenvalues[0];
    let errors: Vec<f64> = [2_000, 4_000, 8_000]
        .iter()
        .map(|&n| (fd_spectrum(&p, &GridSpec::new(15.0, n).unwrap(), 1).unwrap().eigenvalues[0] - reference).abs())
        .collect();
    let orders = [(errors[0] / errors[1]).log2(), (errors[1] / errors[2]).log2()];
    let passed = worst <= 1e-4 && orders.iter().all(|o| (o - 2.0).abs() <= 0.2);
    verdict(
        passed,
        format!(
            "max |W_fd - W_ritz| over the reference sets, nu<=5 = {worst:.1e}; observed orders {:.3}, {:.3}",
            orders[0], orders[1]
        ),
    )
}

fn c6_hellmann_feynman() -> Verdict {
    let r = hellmann_feynman_check(&params(0.0, 2.0, 1.0), 0, 1e-3).unwrap();
    verdict(
        r.passes(1e-4),
        format!(
            "dW0/da = {:.9} vs -<1/xi> = {:.9} (rel {:.1e}); dW0/db = {:.9} vs <xi> = {:.9} (rel {:.1e}); signs ok: {}",
            r.dw_da, r.minus_inverse_xi, r.mismatch_a, r.dw_db, r.plus_xi, r.mismatch_b, r.signs_ok
        ),
    )
}

fn c7_asymptote() -> Verdict {
    let r = asymptote_check(0.0, 1.0, 0, &[10.0, 20.0, 50.0]).unwrap();
    let dev = |k: usize| (r.points[k].ratio - 1.0).abs();
    let oracle_dev = |k: usize| (r.points[k].oracle_ratio - 1.0).abs();
    let passed = r.points.iter().all(|p| p.converged)
        && dev(1) <= 0.02
        && dev(2) <= 0.005
        && oracle_dev(1) <= 0.02
        && oracle_dev(2) <= 0.005
        && r.monotone;
    verdict(
        passed,
        format!(
            "-W0/a^2 deviations at a=10, 20, 50: {:.2e}, {:.2e}, {:.2e} (oracle {:.2e}, {:.2e}, {:.2e}); monotone: {}",
            dev(0),
            dev(1),
            dev(2),
            oracle_dev(0),
            oracle_dev(1),
            oracle_dev(2),
            r.monotone
        ),
    )
}

fn c8_profiles() -> Verdict {
    let grid: Vec<f64> = (0..=800).map(|m| 0.01 * m as f64).collect();
    let mut worst = 0.0f64;
    let mut nodes = Vec::new();
    let mut passed = true;
    for sol in truncation_solutions(2, 0.0, 1.0).unwrap() {
        let c = compare_with_polynomial(&sol, &grid).unwrap();
        worst = worst.max(c.sup_norm);
        passed &= c.sup_norm <= 1e-6 && c.variational_nodes == c.nu && c.polynomial_nodes == c.nu;
        nodes.push(c.variational_nodes);
    }
    verdict(
        passed && nodes == [0, 1, 2],
        format!("n=2 roots: sup-norm {worst:.1e}, node counts {nodes:?}"),
    )
}

fn c9_curves() -> Verdict {
    let fig3 = condsolv(&[
        "scan", "--gamma", "0", "--b", "1", "--a-min", "-3", "--a-max", "6", "--points", "200", "--branches", "6",
    ]);
    let wide = condsolv(&[
        "scan", "--gamma", "0", "--b", "1", "--a-min", "-30", "--a-max", "30", "--points", "121", "--branches", "6",
    ]);
    let fig1 = condsolv(&[
        "scan", "--curves-b", "--n", "2", "--gamma", "0,0.5,1", "--a-min", "-10", "--a-max", "10",
    ]);
    if !(fig3.status.success() && wide.status.success() && fig1.status.success()) {
        return verdict(false, "a scan exited nonzero");
    }
    let fig3 = record_from(&fig3);
    let branch_rows = fig3.rows.iter().filter(|r| r[0] == Cell::text("branch")).count();

    let wide = record_from(&wide);
    let source = wide.column_index("source").unwrap();
    let deviation = wide.column_index("deviation").unwrap();
    let overlay: Vec<f64> = wide
        .rows
        .iter()
        .filter(|r| r[source] == Cell::text("truncation"))
        .map(|r| r[deviation].as_f64().unwrap())
        .collect();
    let worst = overlay.iter().copied().fold(0.0, f64::max);

    let fig1 = record_from(&fig1);
    let per_gamma_ok = [0.0, 0.5, 1.0].iter().all(|&g| {
        let rows = fig1.rows.iter().filter(|r| r[0].as_f64() == Some(g)).count();
        rows == 3 * 200
    });

    let passed = branch_rows == 6 * 200 && overlay.len() == 15 && worst <= 1e-6 && per_gamma_ok;
    verdict(
        passed,
        format!(
            "branch scan {branch_rows} points; {} overlay points for n<=4 within {worst:.1e} of their branch; b-curves three per gamma: {per_gamma_ok}",
            overlay.len()
        ),
    )
}

fn c10_determinism(dir: &Path) -> Verdict {
    let first = dir.join("verify-1.csv");
    let second = dir.join("verify-2.csv");
    let a = condsolv(&["verify", "--out", first.to_str().unwrap()]);
    let b = condsolv(&["verify", "--out", second.to_str().unwrap()]);
    let (x, y) = (std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    verdict(
        !x.is_empty() && x == y && a.status.code() == b.status.code(),
        format!("two verify runs: {} and {} bytes, identical: {}", x.len(), y.len(), x == y),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<Criterion> = vec![
        ("C1", Box::new(c1_reference_spectra)),
        ("C2", Box::new(c2_truncation)),
        ("C3", Box::new(c3_placement)),
        ("C4", Box::new(c4_oscillator)),
        ("C5", Box::new(c5_oracle)),
        ("C6", Box::new(c6_hellmann_feynman)),
        ("C7", Box::new(c7_asymptote)),
        ("C8", Box::new(c8_profiles)),
        ("C9", Box::new(c9_curves)),
        ("C10", Box::new(|| c10_determinism(dir.path()))),
    ];
    let mut failed = Vec::new();
    for (id, check) in &criteria {
        let v = check();
        println!("{id:<4} {}  {}", if v.passed { "PASS" } else { "FAIL" }, v.summary);
        if !v.passed {
            failed.push(*id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria failed: {}", failed.len(), criteria.len(), failed.join(", "));
        std::process::exit(1);
    }
}
