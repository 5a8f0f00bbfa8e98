use thiserror::Error;

/// Errors raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex weight must be at least 1")]
    ZeroWeight,
    #[error("bipartite violation: adjacent vertices share color {0}")]
    ColorClash(char),
    #[error("tree has {vertices} vertices, brute force is limited to {limit}")]
    TreeTooLarge { vertices: usize, limit: usize },
    #[error("total weight {requested} exceeds the configured cap {cap}")]
    WeightCapExceeded { requested: usize, cap: usize },
    #[error("truncation order {requested} exceeds the configured cap {cap}")]
    TruncationCapExceeded { requested: usize, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("series is not graded: {0}")]
    Ungraded(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails at ({i}, {j}, {k})")]
    JacobiFailure { i: usize, j: usize, k: usize },
    #[error("not a product: first nonzero residual at order {order}")]
    NotAProduct { order: usize },
    #[error("SGS condition fails: {0}")]
    SgsFailure(String),
    #[error("linear system at order {order} is inconsistent: {detail}")]
    Infeasible { order: usize, detail: String },
    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("non-finite value encountered during iteration")]
    NonFinite,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
