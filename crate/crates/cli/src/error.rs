use std::fmt;

/// Everything that ends a run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Malformed(String),
    Core(qconstell::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Malformed(m) => write!(f, "malformed input file: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qconstell::Error> for CliError {
    fn from(e: qconstell::Error) -> Self {
        CliError::Core(e)
    }
}
