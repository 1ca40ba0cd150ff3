use thiserror::Error;

use crate::teleportation::Endpoint;

/// Errors raised by the Gaussian state, channel and teleportation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance matrix violates the uncertainty relation (min eigenvalue of V + i\u{3a9} is {0:e})")]
    Unphysical(f64),

    #[error("channel is not completely positive: {0}")]
    NotCompletelyPositive(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mode index {index} out of range for a {modes}-mode state")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error(
        "tau = {tau} is outside the finite-energy window; the resource energy diverges at the \
         {endpoint} endpoint tau = {limit}"
    )]
    Boundary {
        endpoint: Endpoint,
        tau: f64,
        limit: f64,
    },

    #[error("quadrature did not converge: achieved error bound {achieved:e}, target {target:e}")]
    Quadrature { achieved: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
