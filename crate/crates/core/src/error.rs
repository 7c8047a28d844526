use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finder did not converge for polynomial with coefficients {coefficients:?}")]
    RootFinding { coefficients: Vec<f64> },

    #[error(
        "overlap matrix is not numerically positive definite at basis size {size} \
         (condition estimate {condition:.3e}); retry with a smaller basis"
    )]
    IllConditionedBasis { size: usize, condition: f64 },

    #[error("symmetric eigensolver failed to converge after {iterations} iterations on a {size}x{size} matrix")]
    EigenNonConvergence { size: usize, iterations: usize },

    #[error("moment M({order}) overflows double precision")]
    MomentOverflow { order: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("requested {requested} eigenvalues from a grid of {points} points")]
    GridTooCoarse { requested: usize, points: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
