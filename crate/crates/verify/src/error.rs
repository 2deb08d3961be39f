use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// Bad configuration or arguments; exit status 2.
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] s3cone::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, VerifyError>;
