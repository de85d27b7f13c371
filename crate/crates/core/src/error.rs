use thiserror::Error;

/// Errors raised by graph construction, spectral analysis and mapping.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {index} ({u}, {v}) is a self-loop")]
    SelfLoop { index: usize, u: usize, v: usize },
    #[error("edge {index} ({u}, {v}) duplicates an earlier edge")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index} ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { index: usize, u: usize, v: usize, n: usize },
    #[error("edge {index} has nonpositive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid family parameter: {0}")]
    FamilyParameter(String),
    #[error("unknown suite `{name}`; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: usize, reason: String },
    #[error("eigensolver did not converge after {sweeps} iterations (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("graph is disconnected: the lowest eigenvalue has multiplicity {multiplicity}")]
    Disconnected { multiplicity: usize },
    #[error("spectrum has no second eigenvalue group (N = {0})")]
    NoSecondEigenvalue(usize),
    #[error("contraction collapsed the coordinate rank to {rank} (< {m})")]
    RankCollapse { rank: usize, m: usize },
    #[error("contraction left {vertices} vertices, fewer than m = {m}")]
    TooFewVertices { vertices: usize, m: usize },
    #[error("projection index {index} out of range for a {m}-dimensional mapping")]
    ProjectionOutOfRange { index: usize, m: usize },
    #[error("no genus source available for the bound certificate")]
    NoGenusSource,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
