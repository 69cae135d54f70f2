use thiserror::Error;

/// Failures raised by the coefficient field, series operations and the
/// inversion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} exceeds truncation order {truncation}")]
    TruncationExceeded { index: usize, truncation: usize },
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("series is not divisible: {0}")]
    NotDivisible(String),
    #[error("composition requires an inner series with zero constant term")]
    CompositionRequiresNonunit,
    #[error("series is not an almost unit (need f0 = 0 and f1 != 0)")]
    NotAlmostUnit,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("series needs at least one coefficient")]
    EmptySeries,
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
