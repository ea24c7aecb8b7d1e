use std::path::PathBuf;

use thiserror::Error;

use crate::snnls::SnnlsSolution;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("polygon is not embedded (self-distance {distance:e})")]
    NonEmbedded { distance: f64 },

    #[error("configuration too coarse: edge {edge} has length {length} >= 2")]
    TooCoarse { edge: usize, length: f64 },

    #[error("snnls did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        best: Box<SnnlsSolution>,
    },

    #[error("step rejected: {0}")]
    StepRejected(String),

    #[error("tightening stalled after {rejections} consecutive rejections")]
    Stalled { rejections: usize },

    #[error("splice failed: {0}")]
    SpliceFailed(String),

    #[error("no splice in the ensemble succeeded")]
    EmptyEnsemble,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing symmetry data for prime {0}")]
    MissingSymmetry(String),

    #[error("missing conformation for {0}")]
    MissingConformation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
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
