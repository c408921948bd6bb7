use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid quadric: {0}")]
    InvalidQuadric(String),

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("pi exponents differ: {0} vs {1} (twice-exponent)")]
    PiExponentMismatch(i32, i32),

    /// The exact linear system was singular. For a valid nonhyperbolic
    /// quadric this indicates a bug.
    #[error("singular linear system: {0}")]
    Singular(String),

    /// A squared-norm ratio between same-(s, l) basis entries was not a
    /// rational number, or disagreed with the recurrence coefficients.
    #[error("basis norm ratio check failed: {0}")]
    NormRatio(String),

    #[error("root isolation failed: {0}")]
    RootIsolation(String),

    /// A computed result failed its exact post-condition check.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
