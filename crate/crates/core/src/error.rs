//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by selectors, the enumeration oracle, and the matrix
/// generator.
#[derive(Debug, Error)]
pub enum CssError {
    /// Input data is malformed (non-finite entries, wrong shape, bad flags).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A rank precondition failed (e.g. `k` larger than the numerical rank).
    #[error("rank error: {0}")]
    Rank(String),

    /// A documented invariant did not hold at runtime.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A matrix that must be invertible was numerically singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// Exhaustive enumeration was requested beyond the configured capacity.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Rejection sampling exhausted its attempt budget.
    #[error("rejection budget exhausted: {0}")]
    RejectionBudget(String),

    /// Prescribed targets are not jointly feasible.
    #[error("infeasible target: {0}")]
    Infeasible(String),

    /// Two independent computation routes disagreed beyond tolerance.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, CssError>;
