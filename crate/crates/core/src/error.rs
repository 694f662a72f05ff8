use thiserror::Error;

/// Errors raised while building or loading an instance.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{edge}` has coordinate {coord} but the rank is {rank}")]
    CoordOutOfRange { edge: String, coord: usize, rank: usize },
    #[error("malformed square: {0}")]
    BadSquare(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Errors raised by semigraph operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigraphError {
    #[error("degree {requested} is not below {available}")]
    OutOfRange { requested: String, available: String },
    #[error("no commuting square rewrites `{0} {1}`")]
    MissingSquare(String, String),
    #[error("saturation exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("pair is not a minimal common extension")]
    NotMinimalExtension,
}

/// Errors raised by algebra operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    InstanceMismatch,
    #[error("letter `{0}` is not a generator of this instance")]
    UnknownLetter(String),
    #[error("malformed element literal at offset {offset}: {message}")]
    Literal { offset: usize, message: String },
    #[error("the Fock oracle models only the universal algebra")]
    OracleUnavailable,
    #[error("a term of degree {degree} does not fit the Fock depth {depth}")]
    DepthOverflow { degree: String, depth: String },
    #[error("word {0} is not half-standard")]
    NotHalfStandard(String),
    #[error(transparent)]
    Semigraph(#[from] SemigraphError),
}

/// Errors raised by the condition checkers and quotient constructions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("relation {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("relation {0} is not of a supported form (a degree-0 projection or a standard word)")]
    UnsupportedRelation(String),
    #[error("the quotient identifies distinct semigraph elements `{0}` and `{1}`")]
    Identification(String, String),
    #[error("exact quotients are only available for rank-1 instances")]
    UnsupportedRank,
    #[error("vertex `{0}` emits edges with more than one source-side vertex")]
    NonGraphEdge(String),
    #[error("the word has degree zero")]
    ZeroDegree,
    #[error("the projection is zero")]
    ZeroProjection,
    #[error("not a standard projection: {0}")]
    NotProjection(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
