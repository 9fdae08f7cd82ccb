use std::path::PathBuf;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] fml_core::Error),

    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use fml_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => EXIT_PARSE,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Output(_) => EXIT_INFEASIBLE,
            CliError::Core(e) => match e {
                E::InvalidGraph(_) | E::UnknownEdge(..) | E::InvalidLabeling(_) | E::NodeOutOfRange(..) => EXIT_PARSE,
                E::InvalidParameter(_) => EXIT_USAGE,
                _ => EXIT_INFEASIBLE,
            },
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
