use thiserror::Error;

use crate::ineq::CheckReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The input does not satisfy the hypothesis of the requested check.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    /// A visited instance broke an inequality that is supposed to hold.
    #[error("inequality violated: {}", .0.summary())]
    Violation(Box<CheckReport>),
}
