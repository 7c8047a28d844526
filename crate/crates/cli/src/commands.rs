use condsolv::analysis::{curve_scan, eigenfunction_profile, truncation_b_curves, ScanSpec};
use condsolv::frobenius::Unknown;
use condsolv::io::{Cell, OutputRecord, RecordKind};
use condsolv::ritz::{RitzSolver, SpectrumOptions};
use condsolv::verify::run_verify;
use condsolv::{fd_spectrum, truncation_roots_a, truncation_roots_b, GridSpec, ModelParams, TruncationSolution};

use crate::config::{Command, EigenfunctionArgs, ScanArgs, SpectrumArgs, TruncateArgs, VerifyArgs};

/// Scans fail as a whole only above this fraction of failed grid points.
const SCAN_FAILURE_LIMIT: f64 = 0.05;

/// A finished record plus, when the numbers did not come out right, the
/// reason the process should exit nonzero.
pub struct Outcome {
    pub record: OutputRecord,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(record: OutputRecord) -> Self {
        Outcome { record, failure: None }
    }
}

pub fn run(command: &Command) -> condsolv::Result<Outcome> {
    match command {
        Command::Truncate(args) => truncate(args).map(Outcome::ok),
        Command::Spectrum(args) => spectrum(args),
        Command::Scan(args) if args.curves_b => curves_b(args).map(Outcome::ok),
        Command::Scan(args) => scan(args),
        Command::Eigenfunction(args) => eigenfunction(args),
        Command::Verify(args) => Ok(verify(args)),
    }
}

fn truncate(args: &TruncateArgs) -> condsolv::Result<OutputRecord> {
    let set = match (args.a, args.b) {
        (None, Some(b)) => truncation_roots_a(args.n, args.gamma, b)?,
        (Some(a), _) => truncation_roots_b(args.n, args.gamma, a)?,
        (None, None) => unreachable!("validated before dispatch"),
    };
    let mut columns = vec!["root_index".to_string(), "a".into(), "b".into(), "w".into()];
    columns.extend(["multiplicity".to_string(), "residual".into()]);
    columns.extend((0..=args.n).map(|j| format!("c{j}")));
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut record = OutputRecord::new(RecordKind::TruncationRoots, &columns);

    let roots = set.values();
    record
        .meta("n", args.n)
        .meta_num("gamma", args.gamma)
        .meta(
            "unknown",
            match set.unknown {
                Unknown::A => "a",
                Unknown::B => "b",
            },
        )
        .meta_num("fixed", set.fixed)
        .meta("real_roots", roots.len())
        .meta("complex_roots", set.roots.complex.len())
        .meta_num("vieta_sum", set.polynomial.vieta_sum())
        .meta_num("vieta_product", set.polynomial.vieta_product())
        .meta_num("root_sum", roots.iter().sum())
        .meta_num("root_product", roots.iter().product());

    for (i, _) in roots.iter().enumerate() {
        let sol = TruncationSolution::from_params(args.n, set.params(i), i + 1)?;
        let mut row: Vec<Cell> = vec![
            (i + 1).into(),
            sol.params.a.into(),
            sol.params.b.into(),
            sol.w.into(),
            set.roots.multiplicities[i].into(),
            set.roots.residuals[i].into(),
        ];
        row.extend(sol.coeffs.iter().map(|&c| Cell::from(c)));
        record.push(row)?;
    }
    Ok(record)
}

fn spectrum(args: &SpectrumArgs) -> condsolv::Result<Outcome> {
    let params = ModelParams::new(args.gamma, args.a, args.b)?;
    let options = SpectrumOptions {
        n_max: args.n_max,
        ..SpectrumOptions::new(args.count, args.tol)
    };
    let s = RitzSolver::new(args.gamma, args.n_max)?.spectrum(args.a, args.b, &options)?;
    let oracle = if args.oracle {
        Some(fd_spectrum(
            &params,
            &GridSpec::new(args.oracle_xi_max, args.oracle_points)?,
            args.count,
        )?)
    } else {
        None
    };

    let mut columns = vec!["nu", "w", "convergence", "residual"];
    if oracle.is_some() {
        columns.extend(["oracle_w", "oracle_deviation", "box_contaminated"]);
    }
    let mut record = OutputRecord::new(RecordKind::Table, &columns);
    record
        .meta_num("gamma", args.gamma)
        .meta_num("a", args.a)
        .meta_num("b", args.b)
        .meta_num("tol", args.tol)
        .meta("basis_size", s.basis_size)
        .meta("converged", s.converged);
    if let Some(fd) = &oracle {
        record
            .meta_num("oracle_xi_max", fd.grid.xi_max)
            .meta("oracle_points", fd.grid.num_points);
    }
    for nu in 0..args.count {
        let mut row: Vec<Cell> = vec![
            nu.into(),
            s.eigenvalues[nu].into(),
            s.convergence[nu].into(),
            s.residuals[nu].into(),
        ];
        if let Some(fd) = &oracle {
            row.push(fd.eigenvalues[nu].into());
            row.push((fd.eigenvalues[nu] - s.eigenvalues[nu]).abs().into());
            row.push(fd.box_contaminated[nu].into());
        }
        record.push(row)?;
    }
    let failure = (!s.converged).then(|| {
        let worst = s.convergence.iter().copied().fold(0.0, f64::max);
        format!(
            "spectrum not converged to {:e} at basis size {} (last change {worst:e})",
            args.tol, s.basis_size
        )
    });
    Ok(Outcome { record, failure })
}

fn scan(args: &ScanArgs) -> condsolv::Result<Outcome> {
    let b = args.b.expect("validated before dispatch");
    let mut spec = ScanSpec::new(args.gamma[0], b, args.a_min, args.a_max, args.points, args.branches);
    spec.target_tol = args.tol;
    let result = curve_scan(&spec)?;

    let mut record = OutputRecord::new(
        RecordKind::CurveScan,
        &["source", "nu", "root_index", "n", "a", "w", "deviation", "status"],
    );
    record
        .meta("mode", "branches")
        .meta_num("gamma", spec.gamma)
        .meta_num("b", spec.b)
        .meta("points", spec.points)
        .meta("branches", spec.branches)
        .meta("failures", result.failures.len())
        .meta_num("failure_fraction", result.failure_fraction())
        .meta("overlay_ok", result.overlay_ok())
        .meta("monotone", result.monotone.iter().all(|&m| m));

    let status_at = |k: usize| {
        result
            .failures
            .iter()
            .find(|(i, _)| *i == k)
            .map_or("ok", |(_, reason)| {
                if reason.contains("not converged") {
                    "unconverged"
                } else {
                    "failed"
                }
            })
    };
    for (nu, branch) in result.branches.iter().enumerate() {
        for (k, (&a, w)) in result.a_values.iter().zip(branch).enumerate() {
            record.push(vec![
                "branch".into(),
                nu.into(),
                "".into(),
                "".into(),
                a.into(),
                w.map_or_else(|| Cell::text(""), Cell::from),
                "".into(),
                status_at(k).into(),
            ])?;
        }
    }
    for p in &result.truncation_points {
        let status = match (p.on_branch, p.isolated) {
            (true, true) => "on_branch",
            (false, _) => "off_branch",
            (true, false) => "not_isolated",
        };
        record.push(vec![
            "truncation".into(),
            p.nu.into(),
            p.root_index.into(),
            p.n.into(),
            p.a.into(),
            p.w.into(),
            p.deviation.into(),
            status.into(),
        ])?;
    }

    for (k, reason) in &result.failures {
        eprintln!("scan: a = {}: {reason}", result.a_values[*k]);
    }
    let fraction = result.failure_fraction();
    let failure = (fraction > SCAN_FAILURE_LIMIT).then(|| {
        format!(
            "{} of {} scan points failed ({:.1}% > {:.0}%)",
            result.failures.len(),
            result.a_values.len(),
            100.0 * fraction,
            100.0 * SCAN_FAILURE_LIMIT
        )
    });
    Ok(Outcome { record, failure })
}

fn curves_b(args: &ScanArgs) -> condsolv::Result<OutputRecord> {
    let points = truncation_b_curves(args.n, &args.gamma, args.a_min, args.a_max, args.points)?;
    let mut record = OutputRecord::new(RecordKind::CurveScan, &["gamma", "a", "root_index", "b"]);
    record
        .meta("mode", "curves_b")
        .meta("n", args.n)
        .meta("points", args.points);
    for p in points {
        record.push(vec![p.gamma.into(), p.a.into(), p.root_index.into(), p.b.into()])?;
    }
    Ok(record)
}

fn eigenfunction(args: &EigenfunctionArgs) -> condsolv::Result<Outcome> {
    let params = ModelParams::new(args.gamma, args.a, args.b)?;
    let h = args.xi_max / (args.xi_points - 1) as f64;
    let xi: Vec<f64> = (0..args.xi_points).map(|m| h * m as f64).collect();
    let profile = eigenfunction_profile(&params, &args.nu, &xi)?;

    let mut columns = vec!["xi".to_string()];
    columns.extend(args.nu.iter().map(|nu| format!("density_{nu}")));
    let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut record = OutputRecord::new(RecordKind::Profile, &columns);
    record
        .meta_num("gamma", args.gamma)
        .meta_num("a", args.a)
        .meta_num("b", args.b)
        .meta("converged", profile.converged);
    for (k, nu) in profile.nu.iter().enumerate() {
        record
            .meta_num(&format!("w_{nu}"), profile.eigenvalues[k])
            .meta(&format!("nodes_{nu}"), profile.nodes[k]);
    }
    for (m, &x) in xi.iter().enumerate() {
        let mut row: Vec<Cell> = vec![x.into()];
        row.extend(profile.densities.iter().map(|d| Cell::from(d[m])));
        record.push(row)?;
    }
    let failure = (!profile.converged).then(|| "eigenfunctions not converged".to_string());
    Ok(Outcome { record, failure })
}

fn verify(args: &VerifyArgs) -> Outcome {
    let report = run_verify(args.quick);
    let failure = (!report.passed()).then(|| format!("failed checks: {}", report.failed_ids().join(", ")));
    Outcome {
        record: report.to_record(),
        failure,
    }
}
