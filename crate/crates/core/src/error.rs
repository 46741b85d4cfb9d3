//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A power-of-q exponent left the supported range.
    #[error("range error: q-exponent {0} exceeds the supported magnitude")]
    Range(i64),
    /// A series or q-integral failed to converge.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// The evaluation point is a pole of the requested function.
    #[error("pole: {0}")]
    Pole(String),
    /// A lattice function was needed outside of its evaluated window.
    #[error("window error: {0}")]
    Window(String),
    /// A zero that should be simple was found to be degenerate.
    #[error("degeneracy: {0}")]
    Degeneracy(String),
    /// Invalid configuration or parameter input.
    #[error("invalid input: {0}")]
    Input(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
