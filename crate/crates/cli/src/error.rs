use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed PNML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("invalid PNML: {0}")]
    Pnml(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] symvec::Error),
}

impl CliError {
    /// 2 for fixpoint non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(symvec::Error::NonConvergence { .. }) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
