//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by weight construction, operator assembly, and solvers.
#[derive(Debug, Error)]
pub enum WsgdError {
    /// Fractional order outside the supported range (1, 2].
    #[error("fractional order must satisfy 1 < alpha <= 2, got {0}")]
    InvalidOrder(f64),

    /// A weight triple that does not satisfy the defining linear system.
    #[error("weight triple ({0}, {1}, {2}) violates the WSGD constraint system for alpha = {3}")]
    InvalidParams(f64, f64, f64, f64),

    /// Two shifts coincide, making the weight linear system singular.
    #[error("shifts p{i} and p{j} coincide at {value}; the weight system is singular")]
    DegenerateShifts { i: usize, j: usize, value: f64 },

    /// Grid operators only support the canonical integer shift set.
    #[error("grid operators support only the shift set (1, 0, -1); got {0:?}")]
    UnsupportedShifts(Vec<f64>),

    /// Invalid grid or discretization parameter.
    #[error("invalid discretization: {0}")]
    InvalidGrid(String),

    /// LU factorization failed (exactly singular matrix).
    #[error("matrix factorization failed: {0}")]
    SingularMatrix(String),

    /// Error measurement requested but the problem has no exact solution.
    #[error("exact solution required for error measurement but not provided")]
    MissingExact,

    /// Function evaluated outside its mathematical domain.
    #[error("domain violation: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, WsgdError>;
