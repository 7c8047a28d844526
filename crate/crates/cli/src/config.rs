use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use condsolv::io::Format;
use serde::{Deserialize, Serialize};

use crate::UsageError;

const DEFAULT_COUNT: usize = 6;
const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_N_MAX: usize = 80;
const DEFAULT_ORACLE_XI_MAX: f64 = 15.0;
const DEFAULT_ORACLE_POINTS: usize = 40_000;
const DEFAULT_SCAN_POINTS: usize = 200;
const DEFAULT_BRANCHES: usize = 6;
const DEFAULT_CURVE_DEGREE: usize = 2;
const DEFAULT_XI_MAX: f64 = 6.0;
const DEFAULT_XI_POINTS: usize = 301;

fn default_count() -> usize {
    DEFAULT_COUNT
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_n_max() -> usize {
    DEFAULT_N_MAX
}
fn default_oracle_xi_max() -> f64 {
    DEFAULT_ORACLE_XI_MAX
}
fn default_oracle_points() -> usize {
    DEFAULT_ORACLE_POINTS
}
fn default_scan_points() -> usize {
    DEFAULT_SCAN_POINTS
}
fn default_branches() -> usize {
    DEFAULT_BRANCHES
}
fn default_curve_degree() -> usize {
    DEFAULT_CURVE_DEGREE
}
fn default_xi_max() -> f64 {
    DEFAULT_XI_MAX
}
fn default_xi_points() -> usize {
    DEFAULT_XI_POINTS
}
fn default_nu() -> Vec<usize> {
    vec![0]
}

/// Spectra and exact polynomial solutions of the radial operator
/// `-R'' - R'/ξ + (γ²/ξ² - a/ξ + bξ + ξ²) R = W R`.
#[derive(Debug, Parser)]
#[command(name = "condsolv", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Output format.
    #[arg(long, global = true)]
    pub format: Option<Format>,

    /// Write the record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Run the command described by a JSON CliConfig file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// A complete invocation, as accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl CliConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        match (cli.command, cli.config) {
            (Some(command), None) => Ok(CliConfig {
                command,
                format: cli.format.unwrap_or_default(),
                out: cli.out,
            }),
            (None, Some(path)) => {
                let mut config = Self::load(&path)?;
                if let Some(format) = cli.format {
                    config.format = format;
                }
                if cli.out.is_some() {
                    config.out = cli.out;
                }
                Ok(config)
            }
            (None, None) => Err(UsageError("a subcommand or --config is required".into())),
            (Some(_), Some(_)) => Err(UsageError("--config cannot be combined with a subcommand".into())),
        }
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        self.command.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Roots of the truncation condition that makes the series a polynomial.
    Truncate(TruncateArgs),
    /// Lowest eigenvalues by Rayleigh-Ritz, optionally cross-checked.
    Spectrum(SpectrumArgs),
    /// Eigenvalue branches over a range of a, or truncation curves in b.
    Scan(ScanArgs),
    /// Normalised densities ξR² on a grid.
    Eigenfunction(EigenfunctionArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncateArgs {
    /// Polynomial degree.
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Fix a and solve for b.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub a: Option<f64>,
    /// Fix b and solve for a.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = DEFAULT_COUNT)]
    #[serde(default = "default_count")]
    pub count: usize,
    /// Convergence target for every requested eigenvalue.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Largest basis size tried.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Cross-check against the finite-difference solver.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_XI_MAX)]
    #[serde(default = "default_oracle_xi_max")]
    pub oracle_xi_max: f64,
    #[arg(long, default_value_t = DEFAULT_ORACLE_POINTS)]
    #[serde(default = "default_oracle_points")]
    pub oracle_points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanArgs {
    /// One value, or a comma-separated list with --curves-b.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, allow_hyphen_values = true)]
    pub gamma: Vec<f64>,
    /// Required unless --curves-b.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a_max: f64,
    #[arg(long, default_value_t = DEFAULT_SCAN_POINTS)]
    #[serde(default = "default_scan_points")]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_BRANCHES)]
    #[serde(default = "default_branches")]
    pub branches: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Emit the truncation curves b(a) of degree --n instead of branches.
    #[arg(long)]
    #[serde(default)]
    pub curves_b: bool,
    #[arg(long, default_value_t = DEFAULT_CURVE_DEGREE)]
    #[serde(default = "default_curve_degree")]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenfunctionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    /// States to sample, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0")]
    #[serde(default = "default_nu")]
    pub nu: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_XI_MAX)]
    #[serde(default = "default_xi_max")]
    pub xi_max: f64,
    #[arg(long, default_value_t = DEFAULT_XI_POINTS)]
    #[serde(default = "default_xi_points")]
    pub xi_points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Reference-eigenvalue and oscillator-limit checks only.
    #[arg(long)]
    #[serde(default)]
    pub quick: bool,
}

fn finite(name: &str, value: f64) -> Result<(), UsageError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(UsageError(format!("--{name} must be finite, got {value}")))
    }
}

fn gamma_ok(gamma: f64) -> Result<(), UsageError> {
    finite("gamma", gamma)?;
    if gamma < 0.0 {
        return Err(UsageError(format!(
            "--gamma must be non-negative, got {gamma}; the operator depends on γ only through γ² \
             but the series solution is built on ξ^|γ|, so pass |γ|"
        )));
    }
    Ok(())
}

fn positive(name: &str, value: f64) -> Result<(), UsageError> {
    finite(name, value)?;
    if value <= 0.0 {
        return Err(UsageError(format!("--{name} must be positive, got {value}")));
    }
    Ok(())
}

impl Command {
    pub fn validate(&self) -> Result<(), UsageError> {
        match self {
            Command::Truncate(t) => {
                gamma_ok(t.gamma)?;
                match (t.a, t.b) {
                    (Some(a), None) => finite("a", a),
                    (None, Some(b)) => finite("b", b),
                    _ => Err(UsageError("truncate needs exactly one of --a or --b".into())),
                }
            }
            Command::Spectrum(s) => {
                gamma_ok(s.gamma)?;
                finite("a", s.a)?;
                finite("b", s.b)?;
                positive("tol", s.tol)?;
                if s.count == 0 || s.count > s.n_max {
                    return Err(UsageError(format!(
                        "--count must lie in 1..={} (the --n-max basis size), got {}",
                        s.n_max, s.count
                    )));
                }
                if s.oracle {
                    positive("oracle-xi-max", s.oracle_xi_max)?;
                }
                Ok(())
            }
            Command::Scan(s) => {
                for &g in &s.gamma {
                    gamma_ok(g)?;
                }
                finite("a-min", s.a_min)?;
                finite("a-max", s.a_max)?;
                if s.a_max <= s.a_min {
                    return Err(UsageError(format!("--a-max ({}) must exceed --a-min ({})", s.a_max, s.a_min)));
                }
                if s.points < 2 {
                    return Err(UsageError("--points must be at least 2".into()));
                }
                if s.curves_b {
                    if s.b.is_some() {
                        return Err(UsageError("--curves-b solves for b; drop --b".into()));
                    }
                    return Ok(());
                }
                if s.gamma.len() != 1 {
                    return Err(UsageError("a branch scan takes a single --gamma".into()));
                }
                match s.b {
                    Some(b) => finite("b", b)?,
                    None => return Err(UsageError("a branch scan needs --b".into())),
                }
                positive("tol", s.tol)?;
                if s.branches == 0 {
                    return Err(UsageError("--branches must be at least 1".into()));
                }
                Ok(())
            }
            Command::Eigenfunction(e) => {
                gamma_ok(e.gamma)?;
                finite("a", e.a)?;
                finite("b", e.b)?;
                positive("xi-max", e.xi_max)?;
                if e.xi_points < 2 {
                    return Err(UsageError("--xi-points must be at least 2".into()));
                }
                if e.nu.is_empty() {
                    return Err(UsageError("--nu needs at least one state".into()));
                }
                Ok(())
            }
            Command::Verify(_) => Ok(()),
        }
    }
}
