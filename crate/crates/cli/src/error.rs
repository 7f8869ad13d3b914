use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ansatzkit::Error),
    #[error("{0}")]
    Usage(String),
    /// A well-formed request whose mathematical answer is negative.
    #[error("{0}")]
    Failure(String),
    #[error("sequence {0} not found")]
    NotFound(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl std::fmt::Display, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            source,
        }
    }

    /// 1 for mathematical failures, 2 for malformed requests, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        use ansatzkit::Error as E;
        match self {
            CliError::Core(
                E::SyntaxError { .. }
                | E::UnknownCoefficient(_)
                | E::MixedRing(_)
                | E::ParseError { .. }
                | E::InvalidInput(_),
            ) => 2,
            CliError::Core(_) | CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NotFound(_) | CliError::Network(_) | CliError::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
