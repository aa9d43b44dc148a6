use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("label {label} at position {index} is outside 1..={classes}")]
    Label {
        index: usize,
        label: usize,
        classes: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{}: byte {offset}: {msg}", path.display())]
    Idx {
        path: PathBuf,
        offset: u64,
        msg: String,
    },

    #[error("{}: line {line}: {msg}", path.display())]
    Csv {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("class {class} has {available} points, {needed} requested")]
    InsufficientClass {
        class: usize,
        needed: usize,
        available: usize,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("model file: {0}")]
    Model(String),

    #[error("unsupported model version {found} (this build reads version {supported})")]
    ModelVersion { found: u64, supported: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
