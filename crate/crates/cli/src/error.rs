use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Numerics(#[from] pdmwell::Error),

    #[error("non-finite value in column '{column}' cannot be written")]
    NonFiniteOutput { column: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures. Verification failures are reported separately with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerics(e) => match e {
                pdmwell::Error::InvalidParameter(_) | pdmwell::Error::Domain { .. } => 2,
                _ => 3,
            },
            CliError::NonFiniteOutput { .. } => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
