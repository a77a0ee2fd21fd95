//! Error type shared across the crate.
//!
//! Variants split into two families: input rejections (bad dimensions,
//! ranges, or operators that fail a structural precondition) and numerical
//! failures bubbled up from LAPACK. Callers that need to distinguish them —
//! the CLI maps the former to exit code 2 and the latter to 3 — can match on
//! [`Error::is_numerical`].

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("subsystem dimensions must be at least 1, got {n}x{m}")]
    InvalidDims { n: usize, m: usize },

    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("operator must be square with side {expected}, got {rows}x{cols}")]
    ShapeMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("operands live on different spaces: {left}x{left} vs {right}x{right}")]
    DimsDisagree { left: usize, right: usize },

    #[error("state vector must have unit norm, got {norm}")]
    NotUnitNorm { norm: f64 },

    #[error("state vector has (numerically) zero norm")]
    ZeroVector,

    #[error("Schmidt parameter k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("rank parameter r = {r} out of range {min}..={max}")]
    ROutOfRange { r: usize, min: usize, max: usize },

    #[error("operator is not Hermitian within tolerance (max asymmetry {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not normal within tolerance (commutator residual {defect:.3e})")]
    NotNormal { defect: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("operator is not a projection (idempotency defect {defect:.3e})")]
    NotProjection { defect: f64 },

    #[error("operator is not a density operator: {reason}")]
    NotDensity { reason: String },

    #[error("operator has {distinct} distinct eigenvalues, expected exactly 2")]
    NotTwoEigenvalues { distinct: usize },

    #[error("matrix side {side} is not {base}^(2r) for any integer r >= 1")]
    NotTensorPower { side: usize, base: usize },

    #[error("requested matrix side {required} exceeds the size cap {cap}")]
    SizeCapExceeded { required: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed payload: {0}")]
    MalformedPayload(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("linear algebra backend failed: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

impl Error {
    /// True for failures of the numerical backend (as opposed to rejected
    /// input). Eigen/SVD non-convergence lands here.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Linalg(_))
    }
}
