use crate::manifold::ValidationFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0}; expected 2..=5")]
    UnsupportedDimension(usize),

    #[error("vector lies on the null cone (|z^2| = {square_abs:.3e})")]
    NullVector { square_abs: f64 },

    #[error("the Cauchy kernel for odd n = {0} is only single-valued on real arguments")]
    OddDimensionComplexArgument(usize),

    #[error("grid needs at least 3 points per axis, got {0}")]
    GridTooSmall(usize),

    #[error("need at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },

    #[error("mesh is not a domain-manifold boundary: {0}")]
    ValidationFailed(ValidationFailure),

    #[error("evaluation point is on or too close to the boundary null-cone barrier")]
    NearBoundary,

    #[error("no truncated cone from the schedule fits inside the cell of harmonicity")]
    NoValidCone,

    #[error("approach path towards node {node} leaves the requested region at step {step}")]
    PathOutsideRegion { node: usize, step: usize },

    #[error("boundary functions or operators live on different meshes")]
    MeshMismatch,

    #[error("kernel returned a non-finite value for pair ({row}, {col})")]
    NonFiniteKernel { row: usize, col: usize },

    #[error("linear system is ill-conditioned (condition estimate {estimate:.3e})")]
    IllConditioned { estimate: f64 },

    #[error("iterative solver stalled at relative residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("ball of radius {radius:.3e} around node {node} captures no node")]
    EmptyBall { node: usize, radius: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
