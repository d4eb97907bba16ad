use std::path::PathBuf;

/// Errors surfaced by the runner, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),

    #[error(transparent)]
    Core(#[from] catbell_core::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("fixture error: {0}")]
    Fixture(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// 2 for configuration problems, 3 for capacity, 4 for numerical
    /// contracts, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use catbell_core::Error as E;
        match self {
            CliError::Config { .. }
            | CliError::ConfigRead { .. }
            | CliError::UnknownProtocol(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidParameter { .. } => 2,
                E::Capacity { .. } | E::DimensionLimit { .. } => 3,
                E::Contract { .. } | E::Integrator { .. } | E::Unnormalized { .. } => 4,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Fixture(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
