use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the input
/// was well-formed enough to parse but does not satisfy a precondition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty complex")]
    EmptyComplex,
    #[error("malformed simplex {0:?}")]
    MalformedSimplex(Vec<u32>),
    #[error("degree {degree} out of range for a complex of dimension {dim}")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("{0} is not a prime characteristic")]
    NotPrime(u32),
    #[error("not a filter: {0}")]
    NotAFilter(String),
    #[error("invalid barcode type near `{token}`: {reason}")]
    BarcodeSyntax { token: String, reason: String },
    #[error("empty fiber: barcode type {0} is not in the image of the persistence map")]
    EmptyFiber(String),
    #[error("endpoint map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("mismatched fibers: {0}")]
    MismatchedFibers(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("complex has {simplices} simplices; stratum enumeration supports at most {max}")]
    TooManySimplices { simplices: usize, max: usize },
    #[error("too large for exhaustive essentiality: more than {budget} candidate subcomplexes")]
    BudgetExceeded { budget: u64 },
    #[error("expected a pure 2-dimensional complex: {0}")]
    NotTwoDimensional(String),
    #[error("invalid complex file: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
