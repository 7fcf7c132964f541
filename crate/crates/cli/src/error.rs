use std::fmt;

/// Exit codes: 0 success, 2 missing file, 3 parse error, 4 invariant
/// violation, 5 simulated write failure. Unexpected IO errors exit 1.
#[derive(Debug)]
pub enum CliError {
    MissingFile(String),
    Parse(String),
    Invariant(String),
    WriteFailure(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::MissingFile(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::WriteFailure(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::MissingFile(m) => write!(f, "missing file: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
            CliError::WriteFailure(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<sttlab_core::Error> for CliError {
    fn from(e: sttlab_core::Error) -> Self {
        match &e {
            sttlab_core::Error::WriteFailure { .. } => CliError::WriteFailure(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingFile(e.to_string())
        } else {
            CliError::Io(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
