use std::path::PathBuf;

use thiserror::Error;

/// Hard failures. Anything that can be described as a finding about the
/// data goes into a [`crate::report::Report`] instead.
#[derive(Debug, Error)]
pub enum CdfError {
    #[error("unknown {what} `{value}`")]
    UnknownName { what: &'static str, value: String },

    #[error("invalid identifier `{0}`: must be non-empty without surrounding whitespace")]
    InvalidId(String),

    #[error("input is not valid UTF-8 (first invalid byte at offset {offset})")]
    Encoding { offset: usize },

    #[error("top-level JSON value is not an object")]
    NotAnObject,

    #[error("cannot serialize non-finite float at {path}")]
    NonFinite { path: String },

    #[error("side assignment: {0}")]
    SideAssignment(String),

    #[error("formation lines must sum to 10 outfield players, got {sum} from {lines:?}")]
    FormationSum { lines: Vec<usize>, sum: usize },

    #[error("invalid formation `{0}`")]
    FormationSyntax(String),

    #[error("skeletal hierarchy is invalid: {0}")]
    InvalidHierarchy(String),

    #[error("inconsistent fixture spec: {0}")]
    FixtureSpec(String),

    #[error("unknown mutation `{0}`")]
    UnknownMutation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("bundle manifest: {0}")]
    Manifest(String),
}

pub type Result<T, E = CdfError> = std::result::Result<T, E>;

impl CdfError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CdfError::Io {
            path: path.into(),
            source,
        }
    }
}
