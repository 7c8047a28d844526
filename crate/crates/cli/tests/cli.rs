use std::fs;
use std::process::{Command, Output};

use condsolv::io::{Cell, OutputRecord};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condsolv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv(output: &Output) -> OutputRecord {
    OutputRecord::parse_csv(std::str::from_utf8(&output.stdout).unwrap()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn truncate_trivial_degree_zero() {
    let out = run(&["truncate", "--n", "0", "--gamma", "0", "--b", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = csv(&out);
    assert_eq!(r.numeric_column("w").unwrap(), vec![2.0]);
    assert_eq!(r.numeric_column("a").unwrap(), vec![0.0]);
}

#[test]
fn truncate_in_b_matches_closed_form() {
    let out = run(&["truncate", "--n", "1", "--gamma", "1", "--a", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let b = csv(&out).numeric_column("b").unwrap();
    // b = 2[2a(γ+1) ∓ √(a² + 2(2γ+3)(2γ+1)²)] / ((2γ+1)(2γ+3)) at γ = 1, a = 2
    let s = 94f64.sqrt();
    let expected = [2.0 * (8.0 - s) / 15.0, 2.0 * (8.0 + s) / 15.0];
    for (x, e) in b.iter().zip(expected) {
        assert!((x - e).abs() < 1e-8, "{x} vs {e}");
    }
}

#[test]
fn truncate_reports_coefficients() {
    let r = csv(&run(&["truncate", "--n", "2", "--gamma", "0", "--b", "1"]));
    assert_eq!(r.columns[r.columns.len() - 3..], ["c0", "c1", "c2"]);
    assert_eq!(r.numeric_column("c0").unwrap(), vec![1.0; 3]);
}

#[test]
fn spectrum_oscillator() {
    let out = run(&["spectrum", "--gamma", "0", "--a", "0", "--b", "0", "--count", "3"]);
    assert!(out.status.success());
    let w = csv(&out).numeric_column("w").unwrap();
    assert_eq!(w, vec![2.0, 6.0, 10.0]);
}

#[test]
fn spectrum_json_with_oracle() {
    let out = run(&[
        "spectrum", "--gamma", "0", "--a", "1.190016441", "--b", "1", "--count", "2", "--oracle", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = OutputRecord::parse_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let w = r.numeric_column("w").unwrap();
    assert!((w[0] + 0.1664353619).abs() < 1e-6);
    assert!((w[1] - 5.75).abs() < 1e-6);
    assert!(r.numeric_column("oracle_deviation").unwrap().iter().all(|&d| d < 1e-4));
}

#[test]
fn unconverged_spectrum_is_written_and_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = run(&[
        "spectrum", "--gamma", "0", "--a", "5", "--b", "1", "--n-max", "20", "--tol", "1e-14", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not converged"));
    let r = OutputRecord::parse_csv(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.metadata["converged"], "false");
    assert_eq!(r.rows.len(), 6);
}

#[test]
fn single_point_scan_equals_spectrum() {
    let scan = csv(&run(&[
        "scan", "--gamma", "0", "--b", "1", "--a-min", "2", "--a-max", "3", "--points", "2", "--branches", "6",
    ]));
    let spec = csv(&run(&["spectrum", "--gamma", "0", "--a", "2", "--b", "1", "--count", "6"]));
    let a = scan.column_index("a").unwrap();
    let w = scan.column_index("w").unwrap();
    let at_two: Vec<&Cell> = scan
        .rows
        .iter()
        .filter(|r| r[0] == Cell::text("branch") && r[a].as_f64() == Some(2.0))
        .map(|r| &r[w])
        .collect();
    let reference: Vec<Cell> = spec.numeric_column("w").unwrap().into_iter().map(Cell::from).collect();
    assert_eq!(at_two, reference.iter().collect::<Vec<_>>());
}

#[test]
fn curves_b_three_branches_per_gamma() {
    let out = run(&[
        "scan", "--curves-b", "--n", "2", "--gamma", "0,0.5,1", "--a-min", "-10", "--a-max", "10", "--points", "21",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = csv(&out);
    assert_eq!(r.rows.len(), 3 * 3 * 21);
    assert_eq!(r.metadata["mode"], "curves_b");
}

#[test]
fn eigenfunction_profile_nodes() {
    let out = run(&["eigenfunction", "--gamma", "0", "--a", "2", "--b", "1", "--nu", "0,1,2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r = csv(&out);
    assert_eq!(r.columns, ["xi", "density_0", "density_1", "density_2"]);
    for nu in 0..3 {
        assert_eq!(r.metadata[&format!("nodes_{nu}")], nu.to_string());
    }
}

#[test]
fn config_file_reproduces_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    fs::write(
        &config,
        r#"{"command": {"spectrum": {"gamma": 0, "a": 2, "b": 1, "count": 4}}, "format": "json"}"#,
    )
    .unwrap();
    let from_config = run(&["--config", config.to_str().unwrap()]);
    let from_flags = run(&["spectrum", "--gamma", "0", "--a", "2", "--b", "1", "--count", "4", "--format", "json"]);
    assert!(from_config.status.success(), "{}", stderr(&from_config));
    assert_eq!(from_config.stdout, from_flags.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["truncate", "--n", "2", "--gamma", "0"][..],
        &["truncate", "--n", "2", "--gamma", "0", "--a", "1", "--b", "1"],
        &["spectrum", "--gamma", "-1", "--a", "0", "--b", "0"],
        &["spectrum", "--gamma", "0", "--a", "nan", "--b", "0"],
        &["spectrum", "--gamma", "0", "--a", "0"],
        &["scan", "--gamma", "0", "--b", "1", "--a-min", "1", "--a-max", "0"],
        &["frobnicate"],
        &[],
        &["--config", "/nonexistent/run.json"],
        &["verify", "--format", "xml"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn negative_gamma_message_explains() {
    let out = run(&["spectrum", "--gamma", "-1", "--a", "0", "--b", "0"]);
    assert!(stderr(&out).contains("non-negative"));
}

#[test]
fn quick_verify_reports_each_check() {
    let out = run(&["verify", "--quick"]);
    let r = csv(&out);
    assert_eq!(r.metadata["mode"], "quick");
    let criteria: Vec<f64> = r.numeric_column("criterion").unwrap();
    assert!(criteria.iter().all(|&c| c == 1.0 || c == 4.0));
    assert_eq!(criteria.iter().filter(|&&c| c == 1.0).count(), 24);
    let expected = if r.metadata["status"] == "pass" { 0 } else { 1 };
    assert_eq!(out.status.code(), Some(expected));
}

#[test]
fn help_exits_zero() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["scan", "--help"]).status.success());
}
