//! Error and result types shared by every module of the crate.

use std::fmt;

/// Result type used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation (negative,
    /// non-finite, out of range, ...).
    Domain(String),
    /// A value pair violates a cross-argument contract (e.g. mismatched
    /// domain scales between a function and a transform request).
    Contract(String),
    /// Malformed tabulated input (bad header, non-uniform grid, ...).
    Format(String),
    /// A function handed to an adaptive routine produced a non-finite value.
    Evaluation(String),
    /// Adaptive quadrature ran out of subdivisions. Carries the best
    /// estimate obtained and the error bound attached to it.
    Convergence {
        estimate: f64,
        error_bound: f64,
        message: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Contract(msg) => write!(f, "contract error: {msg}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
            Error::Evaluation(msg) => write!(f, "evaluation error: {msg}"),
            Error::Convergence {
                estimate,
                error_bound,
                message,
            } => write!(
                f,
                "convergence error: {message} (best estimate {estimate:e}, error bound {error_bound:e})"
            ),
        }
    }
}

impl std::error::Error for Error {}

/// Rejects non-finite or negative arguments; every special-function call
/// site has `x = p*r >= 0`, so a negative argument is an upstream sign bug.
pub(crate) fn check_nonnegative(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("{name}: argument {x} is not finite")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("{name}: argument {x} is negative")));
    }
    Ok(())
}
