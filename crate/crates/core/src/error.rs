use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit device")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("probability outside [0,1]: {context} = {value}")]
    ProbabilityOutOfRange { context: String, value: f64 },

    #[error("self-loop pair ({0},{0})")]
    SelfLoop(usize),

    #[error("duplicate directed pair ({0},{1})")]
    DuplicatePair(usize, usize),

    #[error("duplicate qubit entry {0}")]
    DuplicateQubit(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("qubit-count mismatch: coupling map has {coupling}, calibration has {calibration}")]
    QubitCountMismatch { coupling: usize, calibration: usize },

    #[error("empty partition")]
    EmptyPartition,

    #[error("empty series")]
    EmptySeries,

    #[error("empty result")]
    EmptyResult,

    #[error("no path found of length {length} after {restarts} restarts")]
    NoPathFound { length: usize, restarts: usize },

    #[error("uncalibrated edge ({0},{1}) on path")]
    UncalibratedEdge(usize, usize),

    #[error("uncalibrated qubit {0}")]
    UncalibratedQubit(usize),

    #[error("partition of {size} qubits is too small for a chain of length {length}")]
    PartitionTooSmall { size: usize, length: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
