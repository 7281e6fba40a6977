use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("dimension {0} exceeds the supported maximum of {1}")]
    DimensionTooLarge(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial degree {0} exceeds 2")]
    DegreeTooHigh(u32),
    #[error("facet {index} has right-hand side {rhs}, expected 1")]
    NotCanonicalFano { index: usize, rhs: String },
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("covariance matrix is singular")]
    SingularGram,
    #[error("vertex is not smooth: determinant of tight normals is {determinant} ({tight} tight facets)")]
    NonSmoothVertex { determinant: String, tight: usize },
    #[error("parameter c = {c} outside (0, {limit})")]
    COutOfRange { c: String, limit: String },
    #[error("linear program is unbounded")]
    LpUnbounded,
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("test configuration has no affine pieces")]
    EmptyConfiguration,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("{0}")]
    Parse(String),
    #[error("identity check failed: {0}")]
    Mismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
