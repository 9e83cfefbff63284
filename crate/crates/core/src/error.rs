use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Matrix Market parse failures. Line numbers are 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed banner: {reason}")]
    Banner { line: usize, reason: String },
    #[error("line {line}: malformed size line: {reason}")]
    SizeLine { line: usize, reason: String },
    #[error("line {line}: matrix is not square ({rows} rows, {cols} columns)")]
    NotSquare { line: usize, rows: usize, cols: usize },
    #[error("line {line}: malformed entry: {reason}")]
    Entry { line: usize, reason: String },
    #[error("line {line}: entry ({row}, {col}) outside a {n}x{n} matrix")]
    OutOfRange {
        line: usize,
        row: usize,
        col: usize,
        n: usize,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    MissingEntries {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: found entries beyond the declared {expected}")]
    ExtraEntries { line: usize, expected: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("labeling has length {found}, instance has {expected} vertices")]
    LabelingLength { expected: usize, found: usize },
    #[error("sequence is not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("vertex {vertex} out of range for an instance with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("instance has no vertices")]
    EmptyGraph,
    #[error("exhaustive search is limited to {max} vertices, instance has {n}")]
    TooLarge { n: usize, max: usize },
    #[error("parents have different lengths ({left} and {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid episode path: {0}")]
    InvalidPath(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("failed to download {url}: {reason}")]
    Network { url: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
