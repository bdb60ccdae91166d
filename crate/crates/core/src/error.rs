use thiserror::Error;

/// Errors raised by the series kernel, the Riordan group operations and the
/// central-triangle identities.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coefficient or row beyond the certified truncation order was requested.
    #[error("precision shortfall: order {required} required, only {available} available")]
    Precision { required: usize, available: usize },

    #[error("singular division: divisor has zero constant term")]
    SingularDivision,

    #[error("composition requires an inner series with zero constant term")]
    Composition,

    #[error("reversion requires s(0) = 0 and s'(0) != 0")]
    Reversion,

    #[error("square root is only supported for series with constant term 1")]
    UnsupportedBranch,

    #[error("normalization: {0}")]
    Normalization(String),

    #[error("unknown array `{0}`")]
    Lookup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed matrix: {0}")]
    Shape(String),

    /// Two independent computations of the same object disagree.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// A factorization or transition identity failed to hold.
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
