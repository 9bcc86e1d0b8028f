use thiserror::Error;

use crate::quaternion::Axis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A kernel, weight, or `sqrt(2 pi b axis)` factor was requested with `b = 0`.
    #[error("parameter b is zero on the {0} axis; the chirp branch must be used instead")]
    DegenerateParameter(Axis),

    #[error("parameter matrix has determinant ad - bc = {0}, expected 1")]
    Determinant(f64),

    #[error("grid shape mismatch: {0}")]
    Shape(String),

    #[error("reconstruction undefined: |g(0)| = {0:e} is numerically zero")]
    ReconstructionUndefined(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
