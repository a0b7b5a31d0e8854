use std::path::PathBuf;

use thiserror::Error;

use crate::decomposition::ValidationReport;

pub type Result<T, E = NaglError> = std::result::Result<T, E>;

/// Broad failure classes, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Infeasible,
    Timeout,
}

#[derive(Debug, Error)]
pub enum NaglError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{what} needs {required} entries, cap is {cap}")]
    CapExceeded {
        what: String,
        required: u128,
        cap: u128,
    },

    #[error("decomposition width {width} exceeds the cap {cap} ({context})")]
    WidthCapExceeded {
        width: usize,
        cap: usize,
        context: String,
    },

    #[error("state index overflow: {0}")]
    StateOverflow(String),

    #[error("negative rewards present; this algorithm requires nonnegative rewards")]
    NegativeReward,

    #[error("alphabet must be binary, got {0} labels")]
    NotBinary(usize),

    #[error("coloring is not proper on the squared graph: edge {0}-{1} is monochromatic")]
    ImproperColoring(usize, usize),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(ValidationReport),

    #[error("no bag contains the closed neighborhood of vertex {0}; decomposition does not cover G^2")]
    NoContainingBag(usize),

    #[error("deadline exceeded")]
    Timeout,
}

impl NaglError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        NaglError::InvalidInput(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            NaglError::CapExceeded { .. }
            | NaglError::WidthCapExceeded { .. }
            | NaglError::StateOverflow(_) => ErrorClass::Infeasible,
            NaglError::Timeout => ErrorClass::Timeout,
            _ => ErrorClass::Input,
        }
    }
}
