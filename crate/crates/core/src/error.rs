use thiserror::Error;

/// Error type shared by all modules.
///
/// The variants map onto the CLI exit codes: usage and parse problems,
/// resource-cap violations, and numerical backend failures are kept apart
/// so callers can classify failures without string matching.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller misuse: mismatched variable counts, indices out of range,
    /// invalid argument combinations.
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed textual input (presentation or representation file).
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A configured cap (degree, term count, matrix size) was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// The numerical backend failed to converge or produced invalid output.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
