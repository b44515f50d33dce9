use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability matrix: {0}")]
    InvalidProbMatrix(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("node id {0:?} is not in the supplied node map")]
    UnknownNode(String),

    #[error("node sets differ between inputs; present in only one file: {}", .0.join(", "))]
    Misaligned(Vec<String>),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("embedding is rank deficient: singular value {index} is {value:e}")]
    RankDeficient { index: usize, value: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("k-means produced an empty cluster in every restart")]
    EmptyCluster,

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("null restriction violates the feature contract: discrepancy {0:e}")]
    ContractViolation(f64),

    #[error("bootstrap replicate {replicate} failed after {attempts} attempts: {source}")]
    ReplicateFailed {
        replicate: usize,
        attempts: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by the data rather than by the caller.
    pub fn is_degenerate_data(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_)
                | Error::RankDeficient { .. }
                | Error::EmptyCluster
                | Error::NoConvergence { .. }
                | Error::Optimizer(_)
                | Error::ReplicateFailed { .. }
        )
    }
}
