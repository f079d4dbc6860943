//! Inverse semigroups as metric spaces: exact arithmetic, word metrics,
//! coarse invariants, finite metric embeddings and band operators.

pub mod coarse;
pub mod embed;
pub mod error;
pub mod metric;
pub mod roe;
pub mod semigroup;
pub mod suite;

pub use error::{Error, Result};
