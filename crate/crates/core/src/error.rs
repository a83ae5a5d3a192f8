use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ray `{0}` is the zero vector")]
    ZeroRay(String),

    #[error("ray `{label}` has dimension {dimension}, at least 2 is required")]
    DimensionTooSmall { label: String, dimension: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("context `{context}`: rays `{first}` and `{second}` are not orthogonal")]
    NotOrthogonal { context: String, first: String, second: String },

    #[error("context `{context}` has {found} atoms, dimension requires {expected}")]
    ContextSize { context: String, expected: usize, found: usize },

    #[error("context `{0}` duplicates an earlier context")]
    DuplicateContext(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid hypergraph: {0}")]
    InvalidGraph(String),

    #[error("{found} single events exceed the limit of {max}; project onto fewer events")]
    TooManyEvents { found: usize, max: usize },

    #[error("invalid event scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("vector norm {norm} differs from 1 by more than {tolerance}")]
    NotUnit { norm: f64, tolerance: f64 },

    #[error("hypergraph `{0}` carries no coordinates")]
    NoCoordinates(String),

    #[error("atom `{atom}` is not a member of context `{context}`")]
    AtomNotInContext { atom: String, context: String },

    #[error("hypergraph admits {measures} noncontextual two-valued measure(s); use enumerate_measures instead")]
    NotKsSet { measures: usize },

    #[error("table row {row}, column {column}: {message}")]
    Table { row: usize, column: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
