use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong while reading, validating or combining
/// pipeline data. All variants are data errors; usage errors live in the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: missing required column {column:?}")]
    MissingColumn { context: String, column: String },

    #[error("{context}: unknown label column(s) {names:?}")]
    UnknownColumns { context: String, names: Vec<String> },

    #[error("{context}: missing label column(s) {names:?}")]
    MissingLabelColumns { context: String, names: Vec<String> },

    #[error("duplicate argument id {id:?} on lines {first} and {second}")]
    DuplicateId {
        id: String,
        first: usize,
        second: usize,
    },

    #[error("line {row}: field {field:?} is empty")]
    EmptyField { row: usize, field: String },

    #[error("{context}: line {row}, column {column:?}: expected 0 or 1, found {value:?}")]
    NonBinaryCell {
        context: String,
        row: usize,
        column: String,
        value: String,
    },

    #[error("{context}: line {line}: {message}")]
    Malformed {
        context: String,
        line: usize,
        message: String,
    },

    #[error("taxonomy: {0}")]
    Taxonomy(String),

    #[error("unknown L1 value {0:?}")]
    UnknownValue(String),

    #[error("value {value:?} has no descriptor at index {index}")]
    UnknownDescriptor { value: String, index: usize },

    #[error("unknown reduced class {0:?}")]
    UnknownReducedClass(String),

    #[error("unknown category {0:?}")]
    UnknownCategory(String),

    #[error("argument(s) without label rows: {0:?}")]
    MissingLabels(Vec<String>),

    #[error("argument roster mismatch; missing ids: {0:?}")]
    RosterMismatch(Vec<String>),

    #[error("run contains argument(s) absent from gold: {0:?}")]
    NotInGold(Vec<String>),

    #[error("predictions reference argument(s) outside the roster: {0:?}")]
    NotInRoster(Vec<String>),

    #[error("length mismatch: gold has {gold} entries, prediction has {predicted}")]
    LengthMismatch { gold: usize, predicted: usize },

    #[error("invalid stub configuration: {0}")]
    StubConfig(String),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
