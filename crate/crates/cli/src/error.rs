use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad parameters; the message names the violated precondition.
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Runtime(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 3,
        }
    }
}

impl From<mertens_lab::Error> for CliError {
    fn from(e: mertens_lab::Error) -> Self {
        use mertens_lab::Error as E;
        match e {
            E::InvalidArgument(_) | E::Precondition(_) | E::TableTooSmall { .. } | E::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            E::NoConvergence { .. } | E::Singular | E::Inconsistent(_) => CliError::Runtime(e.to_string()),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
