use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector is numerically zero and has no projective class")]
    ZeroVector,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("sections belong to different spaces")]
    SpaceMismatch,
    #[error("expected {expected} items, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("configuration is singular")]
    Singular,
    #[error("no start reached the gradient tolerance {grad_tol:e} (best gradient norm {best:e})")]
    NonConvergence { grad_tol: f64, best: f64 },
    #[error("operation not available on model {0}")]
    ModelMismatch(String),
    #[error("{count} nodes inside the ball exceed the degree budget {budget}")]
    BudgetExceeded { count: usize, budget: usize },
    #[error("at least {min} trials required, got {got}")]
    InsufficientTrials { min: usize, got: usize },
    #[error("oversampling level {m} must not be below k = {k}")]
    LevelMismatch { k: u32, m: u32 },
    #[error("configuration is not certified")]
    Uncertified,
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
