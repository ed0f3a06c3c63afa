//! Crate-wide error type with a stable mapping to CLI exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (bad parameters, bad files,
    /// non-disjoint sequences passed to disjoint-only checks, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input on which the requested quantity is undefined (e.g. a function
    /// vanishing on the whole probe grid).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A bracket or accumulator left the representable floating-point range.
    #[error("numerical overflow: {0}")]
    Overflow(String),

    /// The step-height search ran out of grid before finding an admissible
    /// value; the construction's premise plausibly fails for this function.
    #[error("search exhausted at n = {n}: {detail}")]
    SearchExhausted { n: usize, detail: String },

    /// A checked premise of a conditional bound does not hold, so the
    /// conclusion is not asserted.
    #[error("premise not met: {0}")]
    PremiseNotMet(String),

    /// The truncated tail dominates the requested bound, which would be
    /// vacuous at this depth.
    #[error("tail-dominated bound at n = {n}: {detail}")]
    TailDominated { n: usize, detail: String },

    /// The packed measures of a realization would exceed the unit interval.
    #[error("capacity exceeded at block {block}: {detail}")]
    CapacityExceeded { block: usize, detail: String },

    /// Row-limit estimates have not stabilized at the requested depth.
    #[error("unstabilized limit estimates: {0}")]
    Unstabilized(String),

    /// A deterministic check that should hold by theorem reported a violation.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for assertion/verdict failures,
    /// 3 for input errors, 4 for numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SearchExhausted { .. }
            | Error::PremiseNotMet(_)
            | Error::TailDominated { .. }
            | Error::CapacityExceeded { .. }
            | Error::Unstabilized(_)
            | Error::CheckFailed(_) => 2,
            Error::Input(_) | Error::Domain(_) | Error::Io(_) | Error::Json(_) => 3,
            Error::Degenerate(_) | Error::Overflow(_) => 4,
        }
    }
}
