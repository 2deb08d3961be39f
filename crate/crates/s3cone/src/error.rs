use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion norm {norm} is not within tolerance of 1")]
    NotUnit { norm: f64 },
    #[error("frame index {0} is not in 1..=3")]
    FrameIndex(usize),
    #[error("polynomial degree {degree} exceeds quadrature exactness {exactness}")]
    DegreeOverflow { degree: usize, exactness: usize },
    #[error("bundle mismatch: {op} expects {expected}, got {got}")]
    Bundle { op: &'static str, expected: &'static str, got: &'static str },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("link field is not an eigenfield: {0}")]
    NotEigen(String),
    #[error("grid too coarse or pad too thin: {0}")]
    Grid(String),
    #[error("metric not invertible at {point:?}")]
    Singular { point: [f64; 4] },
    #[error("sample point {point:?} too close to the cone point")]
    ConePoint { point: [f64; 4] },
    #[error("gauge parameter |t| = {0} exceeds 0.1")]
    Gauge(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
