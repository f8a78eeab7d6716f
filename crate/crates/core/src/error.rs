use thiserror::Error;

/// Errors raised by the constructions in this crate.
///
/// Law violations found by the checkers are *not* errors; they are reported
/// as data in a [`crate::report::Report`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient color mismatch: {0}")]
    AmbientMismatch(String),
    #[error("not a section of the dependent product: {0}")]
    NotASection(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("size bound {bound} exceeded ({size})")]
    SizeBound { bound: usize, size: usize },
    #[error("invalid relative set: {0}")]
    InvalidSet(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("color mismatch: {0}")]
    ColorMismatch(String),
    #[error("height mismatch: {0}")]
    HeightMismatch(String),
    #[error("no such edge: {0}")]
    NoSuchEdge(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("empty family")]
    EmptyFamily,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("columns are not orthonormal (defect {0:e})")]
    NonOrthonormal(f64),
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),
    #[error("leaf decorations are formal symbols; an algebra is required for the top face")]
    MissingAlgebra,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
