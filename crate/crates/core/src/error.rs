use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to name
/// the violated invariant in a diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cone has no rays")]
    EmptyCone,
    #[error("not simplicial: {0}")]
    NotSimplicial(String),
    #[error("not Gorenstein: {0}")]
    NotGorenstein(String),
    #[error("not Q-Gorenstein: {0}")]
    NotQGorenstein(String),
    #[error("not a polygon: {0}")]
    NotPolygon(String),
    #[error("not Gorenstein homogeneous: {0}")]
    NotGorensteinHomogeneous(String),
    #[error("not fibre-compatible: {0}")]
    NotFibreCompatible(String),
    #[error("no positive relation: {0}")]
    NoPositiveRelation(String),
    #[error("not a circuit: {0}")]
    NotACircuit(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard(_) | Error::SearchExhausted(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
