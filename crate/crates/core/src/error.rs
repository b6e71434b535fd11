//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by the arithmetic, class-group and scan layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input is not an odd squarefree integer > 1.
    #[error("{0} is not an odd squarefree integer greater than 1")]
    NotOddSquarefree(i64),

    /// A precondition on the argument values failed.
    #[error("bad input: {0}")]
    BadInput(String),

    /// The computation would exceed a configured resource bound.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Continued-fraction expansion of a perfect square was requested.
    #[error("{0} is a perfect square")]
    PerfectSquare(u64),

    /// The integer is not a fundamental discriminant.
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    /// A stated operation precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The discriminant falls outside the oracle's configured range.
    #[error("discriminant {0} exceeds the oracle bound {1}")]
    OracleRangeExceeded(i64, i64),

    /// The quadratic form is degenerate (square or zero discriminant).
    #[error("degenerate form ({a}, {b}, {c})")]
    DegenerateForm { a: i64, b: i64, c: i64 },

    /// Two forms with different discriminants were composed.
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    /// The claimed Pell witness does not satisfy c^2 - n e^2 = +-2 with c, e odd.
    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    /// check_final_identity was called without establishing the hypothesis.
    #[error("hypothesis not checked for n = {0}")]
    HypothesisNotChecked(u64),

    /// Fixed-width integer arithmetic overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
