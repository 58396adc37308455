use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed record in one of the text formats. `line` is 1-based.
    #[error("line {line}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: usize,
        column: Option<usize>,
        message: String,
    },

    #[error("duplicate entry: {0}")]
    Duplicate(String),

    #[error("dangling sense neighbor(s): {}", .0.join(", "))]
    DanglingNeighbor(Vec<String>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown label `{label}` for `{key}`")]
    UnknownLabel { key: String, label: String },

    #[error("unknown word type `{0}`")]
    UnknownWord(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// An error raised while reading `path`.
    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column: Some(column),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the failure is attributable to user-supplied input rather
    /// than to a fault inside the toolkit.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InFile { source, .. } => source.is_input_error(),
            Error::NonFinite(_) | Error::Serialization(_) => false,
            _ => true,
        }
    }
}

/// Attaches `path` to errors that do not already name a file.
pub(crate) fn in_file<T>(path: &std::path::Path, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        e @ (Error::Io { .. } | Error::InFile { .. }) => e,
        other => Error::InFile {
            path: path.to_path_buf(),
            source: Box::new(other),
        },
    })
}

pub(crate) fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
