//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// An explicit quotient list ran out before the requested depth.
    #[error("continued fraction has no quotient at index {needed}")]
    ExhaustedQuotients { needed: usize },

    /// Not enough convergents / levels to carry out the computation.
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    /// No admissible partial quotient keeps q_{n+1} inside the growth band.
    #[error("growth band infeasible at quotient index {index}")]
    InfeasibleGrowth { index: usize },

    /// An equality/ordering decision stayed ambiguous at the precision cap.
    #[error("precision conflict: undecidable at {bits} bits")]
    PrecisionConflict { bits: u32 },

    /// A schedule level has too few orbit points for its denominator.
    #[error("schedule too thin: {0}")]
    ScheduleTooThin(String),

    /// The shrink exponent K must exceed 1.
    #[error("invalid K: {0}")]
    InvalidK(String),

    /// A level intersection retained no components.
    #[error("empty intersection at level {level}")]
    EmptyIntersection { level: usize },

    /// The error-function family is not defined at the requested index.
    #[error("error function undefined at n = {0}")]
    FamilyGap(String),

    /// Catch-all for violated preconditions.
    #[error("invalid inputs: {0}")]
    InvalidInputs(String),
}

pub type Result<T> = std::result::Result<T, Error>;
