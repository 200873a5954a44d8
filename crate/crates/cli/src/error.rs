use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Core(#[from] photon_green::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "PARSE_ERROR",
            CliError::Validation(_) => "VALIDATION_ERROR",
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "IO_ERROR",
            CliError::Usage(_) => "USAGE_ERROR",
        }
    }

    /// Process exit status.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) | CliError::Usage(_) => 2,
            CliError::Core(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}
