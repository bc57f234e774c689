use std::path::PathBuf;

/// Errors surfaced by the runner and CLI, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] dtc_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot read series file {path}: {reason}")]
    Input { path: PathBuf, reason: String },
    #[error("validation suite failed: {0} check(s) did not pass")]
    Validation(usize),
}

pub type SimResult<T> = Result<T, SimError>;

impl SimError {
    pub fn config(msg: impl Into<String>) -> Self {
        SimError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for configuration problems, 2 for runtime or capacity failures, 3 for
    /// a failed validation suite.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) | SimError::Model(dtc_core::Error::Config { .. }) => 1,
            SimError::Model(_) | SimError::Io { .. } | SimError::Input { .. } => 2,
            SimError::Validation(_) => 3,
        }
    }
}
