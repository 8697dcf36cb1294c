use std::io;
use std::path::PathBuf;

/// Failures of a CLI run, each mapped to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{module}: {source} ({context})")]
    Domain {
        module: &'static str,
        context: String,
        #[source]
        source: cpm_core::Error,
    },

    #[error("check failed: {0}")]
    Check(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } | CliError::Check(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Attaches parameter context to core errors.
pub trait Context<T> {
    fn context(self, ctx: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for cpm_core::Result<T> {
    fn context(self, ctx: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|e| match e {
            cpm_core::Error::Parse(_) => CliError::Usage(format!("{e} ({})", ctx())),
            other => CliError::Domain {
                module: other.module(),
                context: ctx(),
                source: other,
            },
        })
    }
}
