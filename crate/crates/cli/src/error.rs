use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("could not parse configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{0}")]
    Model(#[from] ccm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("could not write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("could not write json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{failed} of {total} certificates failed")]
    CheckFailed { failed: usize, total: usize },
}

impl CliError {
    /// 0 success, 1 configuration or input problem, 2 failed certificate.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
