use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] hybrid_actuator::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 config, 3 solver failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Model(hybrid_actuator::Error::SolverFailure(_)) => 3,
            HarnessError::Model(_) => 2,
            HarnessError::Io { .. } | HarnessError::Csv { .. } => 4,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
