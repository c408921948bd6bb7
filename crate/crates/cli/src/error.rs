use std::fmt;

use qdirichlet::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// At least one report row failed its certification.
    pub const CERTIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const MALFORMED_POLYNOMIAL: i32 = 3;
    pub const OUT_OF_RANGE: i32 = 4;
    pub const INVALID_QUADRIC: i32 = 5;
    /// Internal hard failure: singular Fischer system, irrational norm
    /// ratio, failed post-condition.
    pub const SOFTWARE: i32 = 70;
    pub const IO: i32 = 74;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(exit::USAGE, message)
    }

    pub fn out_of_range(message: impl Into<String>) -> Self {
        Self::new(exit::OUT_OF_RANGE, message)
    }

    /// Maps a core error raised while reading inputs.
    pub fn input(context: &str, e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::DimensionMismatch { .. } => exit::MALFORMED_POLYNOMIAL,
            Error::InvalidQuadric(_) => exit::INVALID_QUADRIC,
            Error::InvalidParameter(_) | Error::ZeroPolynomial => exit::OUT_OF_RANGE,
            _ => exit::SOFTWARE,
        };
        Self::new(code, format!("{context}: {e}"))
    }

    /// Maps a core error raised during a computation.
    pub fn compute(context: &str, e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) => exit::OUT_OF_RANGE,
            Error::InvalidQuadric(_) => exit::INVALID_QUADRIC,
            _ => exit::SOFTWARE,
        };
        Self::new(code, format!("{context}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
