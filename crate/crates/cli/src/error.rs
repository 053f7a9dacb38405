use std::fmt;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown variable names, inconsistent settings.
    Config(String),
    /// Unreadable or malformed input data.
    Data(String),
    /// Screening kept nothing; the payload is the JSON report written anyway.
    NoValidGraphs(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::NoValidGraphs(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::NoValidGraphs(_) => write!(f, "no valid graphs were kept after screening"),
        }
    }
}

impl From<pcsel::Error> for CliError {
    fn from(e: pcsel::Error) -> Self {
        use pcsel::Error as E;
        match e {
            E::Config(_) | E::Precondition(_) | E::MissingTest | E::NodeOutOfRange { .. } => {
                CliError::Config(e.to_string())
            }
            E::NoValidGraphs => CliError::NoValidGraphs(String::new()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = Result<T, CliError>;
