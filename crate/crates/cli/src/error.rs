use std::fmt;

/// Failure of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    /// Numerical failure inside the core library.
    Failed(String),
    Config(String),
    NotConverged(String),
    BoundsFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::BoundsFailed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
            CliError::BoundsFailed(names) => {
                write!(
                    f,
                    "{} bound check(s) failed: {}",
                    names.len(),
                    names.join(", ")
                )
            }
        }
    }
}

impl From<ftlab_core::Error> for CliError {
    fn from(e: ftlab_core::Error) -> Self {
        use ftlab_core::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidParameter { .. } | E::GridMismatch => {
                CliError::Config(e.to_string())
            }
            E::Io(_) | E::Format(_) => CliError::Io(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
