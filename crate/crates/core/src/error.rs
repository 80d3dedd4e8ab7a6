use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{what} did not converge (achieved {achieved:.3e}, target {target:.3e})")]
    NonConvergence {
        what: &'static str,
        achieved: f64,
        target: f64,
    },
    #[error("degenerate mode {mode}: A = {a}, B = {b} (need A > |B|)")]
    DegenerateMode { mode: String, a: f64, b: f64 },
    #[error("mode cutoff {given} too small, need at least {required}")]
    CutoffTooSmall { given: usize, required: usize },
    #[error("Fock space dimension {dim} exceeds limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
