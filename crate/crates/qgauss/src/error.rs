//! Crate-wide error type.
//!
//! Every fallible operation in this crate reports one of the variants below.
//! The variants are deliberately fine-grained: the feasibility checker and the
//! CLI surface them to users, and tests match on them to pin edge-case
//! behaviour (degree guards, degenerate covariances, domain violations).

use thiserror::Error;

/// Errors produced by construction, evaluation, and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Two vectors or states that must share a Gram space do not.
    #[error("operands belong to different Gram spaces")]
    SpaceMismatch,

    /// A coordinate list does not match the dimension of its space.
    #[error("coordinate vector has length {got}, expected {expected}")]
    BadCoordinateLength { expected: usize, got: usize },

    /// A basis index referenced a dimension the space does not have.
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    /// Matrix rows of uneven length (or an empty matrix).
    #[error("matrix must be square with at least one row")]
    RaggedMatrix,

    /// A matrix that must be symmetric is not.
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },

    /// A matrix that must be positive semidefinite is not; `detail` names the
    /// failing leading principal minor or the elimination step that broke.
    #[error("matrix is not positive semidefinite: {detail}")]
    NotPositiveSemidefinite { detail: String },

    /// A covariance that must have unit diagonal does not.
    #[error("covariance is not standardized: diagonal entry ({index},{index}) = {value}")]
    NotStandardized { index: usize, value: String },

    /// A covariance of the wrong size was supplied.
    #[error("expected a {expected}x{expected} covariance, got {got}x{got}")]
    CovarianceSize { expected: usize, got: usize },

    /// Projection onto an empty family of vectors.
    #[error("projection requires a non-empty family of vectors")]
    EmptyProjection,

    /// An image list that is not a bijection of {1..n}.
    #[error("images do not form a permutation of 1..={n}")]
    InvalidPermutation { n: usize },

    /// The permutation-sum oracle refuses degrees whose factorial cost
    /// explodes; the recursive evaluator has no such limit.
    #[error("naive inner product is limited to tensor degree {max}, got {got}; use fock_inner")]
    DegreeGuard { max: usize, got: usize },

    /// The brute-force moment sweep refuses operator words that are too long.
    #[error("brute-force sweep guard exceeded: word degree {got} > {max}")]
    SweepGuard { max: usize, got: usize },

    /// Hermite operator polynomials are only defined for unit vectors.
    #[error("Hermite operator polynomials require a unit vector, got squared norm {norm}")]
    NonUnitVector { norm: String },

    /// Regression coefficients are undefined when the two conditioning
    /// vectors are collinear.
    #[error("degenerate regression: squared covariance of the conditioning pair equals 1")]
    DegenerateRegression,

    /// The deformation parameter is outside the accepted range [-1, 1).
    #[error("q = {0} is outside [-1, 1)")]
    QOutOfRange(String),

    /// A mathematical precondition (time ordering, open q-interval,
    /// admissible region, ...) was violated.
    #[error("{0}")]
    Domain(String),

    /// A string could not be parsed as an exact rational.
    #[error("cannot parse {input:?} as an exact rational: {reason}")]
    ParseScalar { input: String, reason: String },

    /// The symmetric eigensolver did not converge.
    #[error("symmetric eigensolver failed to converge")]
    EigenFailure,

    /// A malformed or incomplete job description.
    #[error("invalid job: {0}")]
    Input(String),

    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    /// Underlying I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;
