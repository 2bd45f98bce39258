//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("the zero cone has no relative interior point")]
    ZeroCone,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan is not complete")]
    NotComplete,

    #[error("fan is not simplicial")]
    NotSimplicial,

    #[error("fan is already projective; nothing to flip")]
    AlreadyProjective,

    #[error("rank-deficient matrix: {0}")]
    RankDeficient(String),

    #[error("class group has torsion; only free class groups are supported")]
    TorsionClassGroup,

    #[error("weight matrix rejected: {0}")]
    WeightMismatch(String),

    #[error("divisor has non-integer coefficients")]
    NonIntegralDivisor,

    #[error("divisor is not Q-Cartier on cone {0:?}")]
    NotQCartier(Vec<usize>),

    #[error("chamber is not full-dimensional")]
    ChamberNotFullDimensional,

    #[error("ray sets differ: {0}")]
    RaySetMismatch(String),

    #[error("not a refinement: {0}")]
    NotRefinement(String),

    #[error("degenerate weight matrix: {0}")]
    DegenerateWeights(String),

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("schema violation: {0}")]
    Schema(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::IndexOutOfRange(_) => "index-out-of-range",
            Error::ZeroCone => "zero-cone",
            Error::InvalidFan(_) => "invalid-fan",
            Error::NotComplete => "not-complete",
            Error::NotSimplicial => "not-simplicial",
            Error::AlreadyProjective => "already-projective",
            Error::RankDeficient(_) => "rank-deficient",
            Error::TorsionClassGroup => "torsion-class-group",
            Error::WeightMismatch(_) => "weight-mismatch",
            Error::NonIntegralDivisor => "non-integral-divisor",
            Error::NotQCartier(_) => "not-q-cartier",
            Error::ChamberNotFullDimensional => "chamber-not-full-dimensional",
            Error::RaySetMismatch(_) => "ray-set-mismatch",
            Error::NotRefinement(_) => "not-refinement",
            Error::DegenerateWeights(_) => "degenerate-weights",
            Error::Inconsistency(_) => "internal-inconsistency",
            Error::Schema(_) => "schema",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
