//! Error taxonomy shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the input was violated (zero polynomial, wrong
    /// dimensions, vanishing constant term, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The chosen prime divides the leading coefficient; the caller should
    /// retry with another prime.
    #[error("prime {0} divides the leading coefficient")]
    BadPrime(u64),

    /// The input degree exceeds the configured pipeline cap.
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    /// Numeric refinement hit the precision ceiling; retry with a higher one.
    #[error("working precision exhausted at {0} bits")]
    PrecisionExhausted(u32),

    /// A cooperative deadline expired.
    #[error("deadline exceeded")]
    Timeout,

    /// An internal consistency check failed; this indicates a bug or a
    /// violated caller contract, never a property of a valid input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
