use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a q-function or model.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("line {line}: negative count {value}")]
    NegativeCount { line: u64, value: i64 },

    #[error("line {line}: duplicate row for c = {citations}")]
    DuplicateBin { line: u64, citations: u64 },

    #[error("no histogram data in {0}")]
    EmptyData(String),

    #[error("insufficient data for {entity}: {found} usable points, need {needed}")]
    InsufficientData {
        entity: String,
        found: usize,
        needed: usize,
    },

    #[error("{entity}: anchor bin c = {anchor_c} is empty or below min_count")]
    MissingAnchor { entity: String, anchor_c: u64 },

    #[error("T minimizer did not converge for {entity} at q = {q}: {detail}")]
    NonConvergence { entity: String, q: f64, detail: String },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("duplicate entity {0:?}")]
    DuplicateEntity(String),

    #[error("entity mismatch: {0}")]
    EntityMismatch(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
