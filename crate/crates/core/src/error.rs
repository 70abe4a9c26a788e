use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {msg}", file.display())]
    Parse { file: PathBuf, line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("measure masses differ: {left} vs {right}")]
    MassMismatch { left: f64, right: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("eigensolver did not converge (residual {residual:e})")]
    EigenNonConvergence { residual: f64 },

    #[error("label {0} is not in the label alphabet")]
    UnknownLabel(u32),

    #[error("threshold {0} is missing from the shared index")]
    MissingThreshold(f64),

    #[error("no curves to index")]
    EmptyIndex,

    #[error("standardized length {n_std} is shorter than graph length {len}")]
    TooShort { n_std: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training set needs at least two classes")]
    SingleClass,

    #[error("class {class} has {count} samples, fewer than {folds} folds")]
    ClassTooSmall { class: u32, count: usize, folds: usize },

    #[error("SI simulation exceeded {0} steps")]
    SiStepCap(usize),

    #[error("corrupt {what}: {msg}")]
    Format { what: &'static str, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
