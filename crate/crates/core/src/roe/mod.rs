//! Finite band operators on `ℓ²` of an inverse semigroup.

mod decompose;
mod isometry;
mod operator;

pub use decompose::{
    check_representation, decompose_band, propagation, wagner_preston, wagner_preston_on, Choice,
    DecompositionResult, Term,
};
pub use isometry::{is_proper_isometry, path_shift, IsometryReport};
pub use operator::{BandOperator, Matrix, Scalar, DEFAULT_INDEX_CAP, DEFAULT_TOLERANCE};
