use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the algebraic operations.
///
/// Contract violations (mismatched truncations, degree errors, unknown
/// generators) are reported here; internal invariant breakage panics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("generator sets differ: {0}")]
    AlphabetMismatch(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("element is not a Lie element: {0}")]
    NotLie(String),

    #[error("morphism linear part is not invertible in degree {0}")]
    NotInvertible(i64),

    #[error("derivation series did not terminate under truncation")]
    SeriesDivergence,

    #[error("no solution in truncation at degree {degree}, word length {word_length}")]
    NoSolution { degree: i64, word_length: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("not a Maurer-Cartan element: {0}")]
    NotMaurerCartan(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("ideal is not closed under the differential: {0}")]
    IdealNotClosed(String),

    #[error("invalid dg Lie algebra: {0}")]
    InvalidDgl(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("t-exponent {0} exceeds the truncation cap {1}")]
    TExponentOverflow(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Other(String),
}
