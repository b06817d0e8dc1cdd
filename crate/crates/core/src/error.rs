use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input object violates one of its structural invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Two vectors or matrices that must agree in size do not.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A closed form was requested away from the point where it holds.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Grid doubling did not reach the requested phase tolerance.
    #[error("refinement failed after {steps} steps: last change {last_change:e} rad exceeds {tolerance:e}")]
    Refinement {
        steps: usize,
        last_change: f64,
        tolerance: f64,
    },

    /// The requested bipartition has more than two dimensions on the small side.
    #[error("unsupported cut: {0}")]
    UnsupportedCut(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),
}

pub type Result<T> = std::result::Result<T, Error>;
