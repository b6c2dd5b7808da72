//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex is degenerate (|det A| below tolerance)")]
    DegenerateSimplex,

    #[error("need at least {needed} points to tessellate, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("input points do not affinely span dimension {dim}")]
    DegenerateInput { dim: usize },

    #[error("cospherical points make the tessellation ambiguous (perturbation disabled)")]
    CosphericalAmbiguity,

    #[error("outer-simplex ray matrix is singular")]
    DegenerateCone,

    #[error("point lies outside the simplex")]
    OutsideSimplex,

    #[error("point lies outside the cell")]
    OutsideCell,

    #[error("point lies outside the outer simplex")]
    OutsideOuterSimplex,

    #[error("polytope center is not strictly interior")]
    DegeneratePolytope,

    #[error("non-target point set is empty")]
    EmptyNonTarget,

    #[error("class {0} has no training points")]
    EmptyClass(usize),

    #[error("a target point coincides with a non-target point")]
    CoincidentClasses,

    #[error("digraph too large for subset enumeration ({n} > {cap} vertices)")]
    TooLarge { n: usize, cap: usize },

    #[error("class {0} is missing from the evaluation data")]
    MissingClass(usize),

    #[error("dimension {0} exceeds the supported maximum {max}", max = crate::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("parse error at row {row}, column {col}: {msg}")]
    ParseError { row: usize, col: usize, msg: String },

    #[error("label column {0:?} not found")]
    MissingLabel(String),

    #[error("non-numeric feature at row {row}, column {col}")]
    NonNumericFeature { row: usize, col: usize },

    #[error("non-finite feature at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model file is not compatible: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
