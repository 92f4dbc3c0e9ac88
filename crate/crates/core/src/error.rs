use thiserror::Error;

/// Errors produced by graph construction, chain building and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("orientation {orientation} does not apply to a {kind} graph")]
    OrientationMismatch {
        orientation: &'static str,
        kind: &'static str,
    },

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("{kind} graph needs at least {min} vertices, got {got}")]
    TooFewVertices {
        kind: &'static str,
        min: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("row {row}: {reason}")]
    NotStochastic { row: usize, reason: String },

    #[error("row {row}: {reason}")]
    NotGenerator { row: usize, reason: String },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("chain is reducible; the stationary distribution is not unique")]
    Reducible,

    #[error("matrix is not doubly stochastic")]
    NotDoublyStochastic,

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("invalid time grid: {0}")]
    InvalidTime(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("channel needs at least two inputs, got {0}")]
    ChannelTooSmall(usize),

    #[error("operation requires a symmetric matrix")]
    NotSymmetric,
}

pub type Result<T> = std::result::Result<T, Error>;
