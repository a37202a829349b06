use thiserror::Error;

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid flag shape: {0}")]
    ShapeInvalid(String),

    #[error("dimension mismatch: insertion degrees sum to {insertion_degree}, but dim fQuot = {dimension}")]
    DimensionMismatch {
        insertion_degree: u64,
        dimension: u64,
    },

    #[error("beta out of range for insertion (alpha={alpha}, beta={beta}): {reason}")]
    BetaOutOfRange {
        alpha: usize,
        beta: usize,
        reason: String,
    },

    #[error("lambda index {index} out of range for a sample with {n} weights")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("elementary symmetric degree {k} exceeds list length {len}")]
    DegreeOutOfRange { k: usize, len: usize },

    #[error("invalid weight sample: {0}")]
    InvalidSample(String),

    #[error("a denominator character vanished at the weight sample")]
    ZeroDenominator,

    #[error("localization totals disagree across samples: {first} vs {other}")]
    SampleDisagreement {
        first: Box<Rational>,
        other: Box<Rational>,
    },

    #[error("localization total {0} is not an integer")]
    NonIntegerResult(Box<Rational>),

    #[error("no admissible weight sample found after {attempts} attempts")]
    ResampleExhausted { attempts: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// Stable name of the variant, used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeInvalid(_) => "ShapeInvalid",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BetaOutOfRange { .. } => "BetaOutOfRange",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::InvalidSample(_) => "InvalidSample",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::SampleDisagreement { .. } => "SampleDisagreement",
            Error::NonIntegerResult(_) => "NonIntegerResult",
            Error::ResampleExhausted { .. } => "ResampleExhausted",
            Error::Precondition(_) => "Precondition",
        }
    }

    /// True for failures that indicate a defect in the computation rather
    /// than a bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::SampleDisagreement { .. }
                | Error::NonIntegerResult(_)
                | Error::ResampleExhausted { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
