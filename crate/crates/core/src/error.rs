use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid boundary parameters: {0}")]
    InvalidParams(String),

    #[error("boundary parameter map has a pole: {0}")]
    Pole(String),

    #[error("system size {len} exceeds the dense construction bound {max}")]
    DimensionOverflow { len: usize, max: usize },

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("evaluation hit an uncancelled pole at u = {0}")]
    EvaluationPole(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("energy has imaginary part {0:.3e}")]
    ComplexEnergy(f64),

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    #[error("ill-conditioned linear system (condition estimate {0:.3e}); refine the grid")]
    IllConditioned(f64),

    #[error("filling target {target} unreachable on Q0 in [0, {lambda_max}]")]
    UnreachableFilling { target: f64, lambda_max: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
