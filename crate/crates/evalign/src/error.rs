use std::io;
use std::path::PathBuf;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    /// Conflicting evidence, invalid mass function, and similar.
    Domain = 1,
    /// Bad flags, unreadable or malformed input files.
    Usage = 2,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: evalign_core::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] evalign_core::Error),
    #[error("writing output: {0}")]
    Output(#[source] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Domain(_) => ExitCode::Domain,
            _ => ExitCode::Usage,
        }
    }
}
