//! Gauss-Legendre rules: fixed nodes, a graded composite rule on `[0, L]` and
//! an adaptive integrator for radial integrals.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// A discrete rule `∫ f ≈ Σ w_k f(x_k)`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Breakpoints `0, r^K, …, r, 1` followed by uniform panels of width `width`
/// up to `upper`. The geometric grading near the origin resolves the
/// non-analytic `ξ^s` factors that appear for non-integer `2γ`.
pub fn graded_breakpoints(upper: f64, width: f64) -> Vec<f64> {
    const RATIO: f64 = 0.2;
    const LEVELS: i32 = 14;
    let mut edges = vec![0.0];
    edges.extend(
        (1..=LEVELS)
            .rev()
            .map(|k| RATIO.powi(k))
            .filter(|&e| e < upper),
    );
    let mut x = 1.0_f64.min(upper);
    edges.push(x);
    while x < upper {
        let next = (x + width).min(upper);
        if next - x > 1e-12 {
            edges.push(next);
        }
        x = next;
    }
    edges.dedup();
    edges
}

/// Composite Gauss-Legendre rule with `points` nodes on each panel.
pub fn composite(edges: &[f64], points: usize) -> Rule {
    let (x, w) = gauss_legendre(points);
    let mut nodes = Vec::with_capacity(points * edges.len());
    let mut weights = Vec::with_capacity(points * edges.len());
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + half * xi);
            weights.push(half * wi);
        }
    }
    Rule { nodes, weights }
}

const ADAPTIVE_ORDER: usize = 15;
const ADAPTIVE_MAX_DEPTH: usize = 40;

/// Adaptive Gauss-Legendre integration of `f` over `[lo, hi]`: each panel is
/// accepted when the 15-point estimate agrees with the sum over its two
/// halves to within its share of `tol`.
pub fn integrate_adaptive(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(ADAPTIVE_ORDER);
    let panel = |a: f64, b: f64| -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>()
    };
    let mut total = 0.0;
    let mut worst = 0.0_f64;
    let mut stack = vec![(lo, hi, panel(lo, hi), 0usize)];
    while let Some((a, b, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = panel(a, m);
        let right = panel(m, b);
        let err = (left + right - whole).abs();
        let share = tol * (b - a) / (hi - lo);
        if err <= share.max(1e-15 * (left + right).abs()) || depth >= ADAPTIVE_MAX_DEPTH {
            if depth >= ADAPTIVE_MAX_DEPTH {
                worst = worst.max(err);
            }
            total += left + right;
        } else {
            stack.push((a, m, left, depth + 1));
            stack.push((m, b, right, depth + 1));
        }
    }
    if worst > tol {
        return Err(Error::Quadrature {
            tolerance: tol,
            estimate: worst,
        });
    }
    Ok(total)
}

/// `∫_0^cutoff f(ξ) dξ`, adaptively, starting from the graded partition so
/// that endpoint behaviour at the origin is resolved.
pub fn radial_integral(f: impl Fn(f64) -> f64, cutoff: f64, tol: f64) -> Result<f64> {
    let edges = graded_breakpoints(cutoff, 1.0);
    let pieces = edges.len() - 1;
    let mut total = 0.0;
    for pair in edges.windows(2) {
        total += integrate_adaptive(&f, pair[0], pair[1], tol / pieces as f64)?;
    }
    Ok(total)
}
