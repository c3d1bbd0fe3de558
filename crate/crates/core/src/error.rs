//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mesh structure error: {0}")]
    MeshStructure(String),

    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),

    #[error("boundary violation: |{field}| = {value:e} at a boundary vertex exceeds {tol:e}")]
    BoundaryViolation {
        field: String,
        value: f64,
        tol: f64,
    },

    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    #[error("assembly invariant violated: {0}")]
    AssemblyInvariant(String),

    #[error("solver failure ({kind}): relative residual {residual:e} after {iterations} iterations")]
    SolverFailure {
        kind: SolverFailureKind,
        residual: f64,
        iterations: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Distinguishes a structurally singular system from an iteration that ran
/// out of budget before reaching the residual tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverFailureKind {
    Singular,
    ToleranceNotReached,
}

impl std::fmt::Display for SolverFailureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverFailureKind::Singular => write!(f, "system singular"),
            SolverFailureKind::ToleranceNotReached => write!(f, "tolerance not reached"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
