use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid chain complex at degree {degree}: {reason}")]
    InvalidComplex { degree: usize, reason: String },

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("operation undefined on the empty polytope")]
    EmptyPolytope,

    #[error("invariant unavailable: {0}")]
    InvariantUnavailable(String),

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("vertex cap exceeded: graph has {found} vertices, cap is {cap}")]
    VertexCapExceeded { cap: usize, found: usize },

    #[error("word is not in the subgroup")]
    NotInSubgroup,

    #[error("permutation action is not transitive")]
    NotTransitive,

    #[error("point stabilizer is not a normal subgroup")]
    NotNormal,

    #[error("estimation failed: {0}")]
    EstimationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit status: 2 for bad input, 3 for undecided, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RankMismatch { .. }
            | Error::GeneratorOutOfRange { .. }
            | Error::DimensionMismatch(_)
            | Error::NotSquare { .. }
            | Error::Parse(_)
            | Error::Schema(_)
            | Error::InvalidComplex { .. }
            | Error::ZeroElement
            | Error::EmptyPolytope
            | Error::NotInSubgroup
            | Error::NotTransitive
            | Error::NotNormal => 2,
            Error::Undecided(_) | Error::VertexCapExceeded { .. } | Error::InvariantUnavailable(_) => 3,
            Error::EstimationFailed(_) => 4,
        }
    }

    /// Short machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::GeneratorOutOfRange { .. } => "generator_out_of_range",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotSquare { .. } => "not_square",
            Error::Parse(_) => "parse",
            Error::Schema(_) => "schema",
            Error::InvalidComplex { .. } => "invalid_complex",
            Error::ZeroElement => "zero_element",
            Error::EmptyPolytope => "empty_polytope",
            Error::InvariantUnavailable(_) => "invariant_unavailable",
            Error::Undecided(_) => "undecided",
            Error::VertexCapExceeded { .. } => "vertex_cap_exceeded",
            Error::NotInSubgroup => "not_in_subgroup",
            Error::NotTransitive => "not_transitive",
            Error::NotNormal => "not_normal",
            Error::EstimationFailed(_) => "estimation_failed",
        }
    }
}
