use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operand does not belong to the oracle it was handed to.
    #[error("element {element} does not belong to the {family} oracle")]
    DomainMismatch { element: String, family: String },

    #[error("D-relation on an infinite oracle needs an explicit search scope")]
    ScopeRequired,

    #[error("invalid family descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("invalid metric space: {0}")]
    InvalidSpace(String),

    /// Two tables or operators were indexed by different element sets.
    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("decomposition unavailable: no properness witness found at radius {radius}")]
    DecompositionUnavailable { radius: u64 },

    #[error("propagation is infinite: an entry joins distinct L-classes")]
    InfinitePropagation,

    #[error("distortion violated between {y} and {z}: d_X = {dx}, embedded = {de}")]
    DistortionViolation {
        y: String,
        z: String,
        dx: u64,
        de: u64,
        certificate: Vec<String>,
    },

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
