use thiserror::Error;

/// Failures of a CLI run, each mapped to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cap exceeded: {0}")]
    Cap(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 usage, 2 numerical failure, 3 cap exceeded. I/O problems count as
    /// usage errors (bad `--out` or `--config` path).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<dcat_core::Error> for CliError {
    fn from(e: dcat_core::Error) -> Self {
        use dcat_core::Error as E;
        match e {
            E::NoConvergence { .. }
            | E::IndeterminateLimit { .. }
            | E::DegenerateNorm { .. }
            | E::TraceDefect { .. } => CliError::Numerical(e.to_string()),
            E::BasisTooLarge { .. } | E::Overflow { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
