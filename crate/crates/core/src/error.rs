use thiserror::Error;

use crate::lattice::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("class not compatible with lift: {0}")]
    Consistency(String),

    #[error("model failed validation:\n{0}")]
    Validation(ValidationReport),

    #[error("lattice mismatch between series operands")]
    LatticeMismatch,

    #[error("surgery: {0}")]
    Surgery(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("contour tracking discontinuity at theta = {theta}: {reason}")]
    Contour { theta: f64, reason: String },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("malformed manifold document: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
