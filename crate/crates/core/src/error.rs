use thiserror::Error;

/// Errors raised by the geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs coincide or are collinear where a proper configuration is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A polygon is not strictly convex and counterclockwise.
    #[error("polygon is not strictly convex: {0}")]
    NonConvex(String),

    /// The root finder could not bracket or converge.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Rebuilding a polygon after a vertex move did not reproduce the requested geometry.
    #[error("closure error {error:e} exceeds {limit:e}")]
    Closure { error: f64, limit: f64 },
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
