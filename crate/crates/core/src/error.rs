use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("routing error: {0}")]
    Routing(String),
    #[error("arity error: expected {expected} items, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("tomography record is missing setting {0}")]
    MissingSetting(String),
    #[error("degenerate projection: qutrit subspace weight {0:e}")]
    DegenerateProjection(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
