use latticestat::Error as CoreError;
use thiserror::Error;

/// Process exit codes. Verdicts are data: a refuted or undetermined query
/// still exits with `OK`.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const RESOLUTION: i32 = 3;
    pub const SHAPE: i32 = 4;
    pub const INTERNAL: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: CoreError,
    },

    #[error("unknown query id `{0}`")]
    UnknownQuery(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn core(context: impl Into<String>, source: CoreError) -> Self {
        CliError::Core {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Config(_) => exit::PARSE,
            CliError::UnknownQuery(_) => exit::RESOLUTION,
            CliError::Internal(_) => exit::INTERNAL,
            CliError::Core { source, .. } => match source {
                CoreError::Parse { .. } | CoreError::Usage(_) | CoreError::RationalFunction(_) => exit::PARSE,
                CoreError::Resolution(_) | CoreError::UnknownTheorem(_) => exit::RESOLUTION,
                CoreError::Shape(_)
                | CoreError::SpaceMismatch { .. }
                | CoreError::Dimension(_)
                | CoreError::OutOfRange { .. } => exit::SHAPE,
                CoreError::Refused(_) | CoreError::Precondition { .. } => exit::INTERNAL,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
