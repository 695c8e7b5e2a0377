use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid construction: {0}")]
    Grid(String),

    #[error("length mismatch: expected {expected} samples, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("only {found} bound states exist, {requested} requested")]
    Unbound { found: usize, requested: usize },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("insufficient boundary decay: |psi| = {0:.3e} at the outer grid edge")]
    Decay(f64),

    #[error("boundary amplitude {amplitude:.3e} exceeds 1e-4 at step {step}")]
    BoundaryContamination { step: usize, amplitude: f64 },

    #[error("expected exactly one sign change, found {0:?}")]
    Crossings(Vec<f64>),

    #[error("forward direction is singular: momentum transfer q = 0")]
    SingularForward,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
