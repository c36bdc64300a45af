use thiserror::Error;

use crate::report::VerificationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("theta matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("theta matrix rows have inconsistent lengths")]
    RaggedTheta,

    #[error("elements live over different deformation matrices")]
    ThetaMismatch,

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("operators act on different truncated spaces")]
    SpaceMismatch,

    #[error("cannot add a linear and an antilinear operator")]
    LinearityMismatch,

    #[error("operator is antilinear; a linear operator is required")]
    Antilinear,

    #[error("operator is not selfadjoint (deviation {deviation:.3e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("precondition failed: {what}")]
    Precondition {
        what: String,
        report: Option<Box<VerificationReport>>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(what: impl Into<String>, report: VerificationReport) -> Self {
        Error::Precondition {
            what: what.into(),
            report: Some(Box::new(report)),
        }
    }
}
