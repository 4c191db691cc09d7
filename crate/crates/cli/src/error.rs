use std::fmt;

/// CLI failure, classified by the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad configuration; names the offending field.
    Config { field: String, message: String },
    /// Unreadable input data; names the row where it went wrong.
    Data { row: usize, message: String },
    Io(String),
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Data { .. } => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => {
                write!(f, "invalid config field `{field}`: {message}")
            }
            CliError::Data { row, message } => write!(f, "malformed trace file at row {row}: {message}"),
            CliError::Io(message) => write!(f, "i/o failure: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Maps a library error raised while validating or running a config.
pub(crate) fn from_core(err: ennbo_core::Error) -> CliError {
    use ennbo_core::Error as E;
    let field = match &err {
        E::UnknownMethod { .. } => "methods",
        E::UnknownFunction { .. } => "function",
        E::ZeroDimension | E::DimensionMismatch { .. } => "dimension",
        E::InvalidParameter { name, .. } => name,
        E::MalformedTrace { row, reason } => {
            return CliError::Data {
                row: *row,
                message: reason.clone(),
            }
        }
        E::Io(msg) => return CliError::Io(msg.clone()),
        _ => "run",
    };
    CliError::config(field, err)
}
