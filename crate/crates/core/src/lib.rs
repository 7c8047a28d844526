//! Two routes to the spectrum of the radial operator
//!
//! ```text
//! L = -d²/dξ² - (1/ξ) d/dξ + γ²/ξ² - a/ξ + bξ + ξ²,      L R = W R,   ξ > 0
//! ```
//!
//! * [`frobenius`]: the power-series ansatz `R = ξ^γ e^{-bξ/2-ξ²/2} P(ξ)`, its
//!   three-term recurrence and the truncation conditions that force `P` to be
//!   a polynomial. Each truncation yields one eigenvalue for a handful of
//!   specially tuned models.
//! * [`ritz`]: a Rayleigh-Ritz solver over the Gaussian-weighted monomial
//!   basis `ξ^{γ+j} e^{-ξ²/2}` that yields the whole spectrum `W_ν(γ, a, b)`
//!   for any parameters.
//! * [`oracle`]: an independent finite-difference discretisation used to
//!   cross-check the variational eigenvalues.
//! * [`analysis`]: expectation values, Hellmann-Feynman slopes, the large-`a`
//!   Coulomb limit, curve scans and eigenfunction profiles.
//! * [`io`]: deterministic CSV/JSON records.
//! * [`verify`]: the bundled verification checks behind `condsolv verify`.

pub mod analysis;
pub mod error;
pub mod frobenius;
pub mod io;
pub mod oracle;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod radial;
pub mod ritz;
pub mod verify;

pub use error::{Error, Result};
pub use frobenius::{
    polynomial_radial_function, series_coefficients, truncation_energy,
    truncation_polynomial_in_a, truncation_polynomial_in_b, truncation_roots_a,
    truncation_roots_b, truncation_solutions, RootSet, SeriesCoefficients, TruncationSolution,
};
pub use oracle::{fd_spectrum, FdSpectrum, GridSpec};
pub use params::ModelParams;
pub use radial::RadialFunction;
pub use ritz::{spectrum, SpectrumOptions, SpectrumResult};
