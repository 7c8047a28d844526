use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::{polynomial_radial_function, TruncationSolution};
use crate::params::ModelParams;
use crate::ritz::{spectrum, SpectrumResult};

const PROFILE_TOLERANCE: f64 = 1e-12;

/// Normalised densities `ξ R_ν(ξ)²` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub params: ModelParams,
    pub nu: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    pub xi: Vec<f64>,
    /// `densities[k][m] = ξ_m R_{nu[k]}(ξ_m)²`.
    pub densities: Vec<Vec<f64>>,
    /// Interior nodes of each `R_ν`.
    pub nodes: Vec<usize>,
    pub converged: bool,
}

fn solve_for_profiles(params: &ModelParams, nu_list: &[usize]) -> Result<SpectrumResult> {
    let top = *nu_list
        .iter()
        .max()
        .ok_or_else(|| Error::invalid("at least one ν is required"))?;
    spectrum(params, top + 1, PROFILE_TOLERANCE)
}

pub fn eigenfunction_profile(params: &ModelParams, nu_list: &[usize], xi_grid: &[f64]) -> Result<Profile> {
    if xi_grid.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::invalid("ξ grid must hold finite non-negative values"));
    }
    let s = solve_for_profiles(params, nu_list)?;
    let mut densities = Vec::with_capacity(nu_list.len());
    let mut nodes = Vec::with_capacity(nu_list.len());
    for &nu in nu_list {
        let r = s.radial_function(nu)?.normalized();
        densities.push(xi_grid.iter().map(|&x| r.density(x)).collect());
        nodes.push(r.nodes());
    }
    Ok(Profile {
        params: *params,
        nu: nu_list.to_vec(),
        eigenvalues: nu_list.iter().map(|&nu| s.eigenvalues[nu]).collect(),
        xi: xi_grid.to_vec(),
        densities,
        nodes,
        converged: s.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileComparison {
    pub n: usize,
    pub root_index: usize,
    pub nu: usize,
    /// `max_ξ |ξR_var² - ξR_poly²|` over the grid.
    pub sup_norm: f64,
    pub variational_nodes: usize,
    pub polynomial_nodes: usize,
    pub variational_w: f64,
    pub polynomial_w: f64,
}

/// Variational state `ν = i - 1` of the model on a truncation curve against
/// the exact polynomial solution, both normalised and sign-aligned.
pub fn compare_with_polynomial(sol: &TruncationSolution, xi_grid: &[f64]) -> Result<ProfileComparison> {
    let nu = sol.root_index - 1;
    let s = solve_for_profiles(&sol.params, &[nu])?;
    let var = s.radial_function(nu)?.normalized();
    let poly = polynomial_radial_function(sol)?.normalized();
    let sup_norm = xi_grid
        .iter()
        .map(|&x| (var.density(x) - poly.density(x)).abs())
        .fold(0.0, f64::max);
    Ok(ProfileComparison {
        n: sol.n,
        root_index: sol.root_index,
        nu,
        sup_norm,
        variational_nodes: var.nodes(),
        polynomial_nodes: poly.nodes(),
        variational_w: s.eigenvalues[nu],
        polynomial_w: sol.w,
    })
}
