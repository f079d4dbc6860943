//! Isometric embedding of finite integer metric spaces into L-classes of
//! symmetric inverse monoids.

mod construction;
mod matching;
mod space;

pub use construction::{cross_check, embed_space, verify_distortion, CrossCheck, DistortionReport, Embedding, Step};
pub use matching::{build_matchings, Colorer, Involution, Level, MatchingFamily};
pub use space::FiniteMetricSpace;
