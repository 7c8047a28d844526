//! Rayleigh-Ritz approximation of the spectrum over the non-orthogonal basis
//! `u_j(ξ) = ξ^{γ+j} e^{-ξ²/2}`, `j = 0, 1, …`, inner products under `ξ dξ`.
//!
//! The monomial basis is available directly ([`overlap_matrix`],
//! [`hamiltonian_matrix`]) from closed-form Gaussian moments, but its Gram
//! matrix loses positive definiteness in double precision beyond a dozen or
//! so functions. The production route ([`spectrum`]) therefore works in the
//! same subspace through an orthonormal polynomial basis ([`OrthoBasis`]),
//! which keeps the overlap at the identity up to rounding for all basis
//! sizes used here.

pub mod basis;
pub mod moments;
pub mod monomial;
pub mod solve;
mod spectrum;

pub use basis::{OperatorMatrices, OrthoBasis, OrthoPolys};
pub use moments::{moments, MomentTable};
pub use monomial::{hamiltonian_matrix, hamiltonian_matrix_unsymmetrized, monomial_spectrum, overlap_matrix};
pub use solve::{solve_generalized, GeneralizedEigen};
pub use spectrum::{spectrum, RitzSolver, SpectrumOptions, SpectrumResult, DEGENERACY_GAP};
