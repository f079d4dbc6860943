//! Inverse semigroup arithmetic, closures, and Green's relations.

mod element;
mod family;
mod finite;
mod green;
mod io;

pub use element::{Element, PartialBijection};
pub use family::{make_family, ChainKind, Family, FamilyDescriptor, GroupDescriptor, GroupTable, SemigroupOracle};
pub use finite::{adjoin_identity, classify, generate_closure, Classification, FiniteSemigroup, GenerationStatus, SemigroupKind};
pub use green::{green_related, natural_leq, GreenTable, Relation};
pub use io::ConcreteDocument;

use crate::error::{Error, Result};

/// Exact multiplication and inversion on canonical-keyed elements.
///
/// `mul` and `inv` assume their operands pass `contains`; the checked
/// `multiply` / `invert` wrappers report a domain mismatch instead.
pub trait InverseSemigroup {
    fn name(&self) -> String;

    fn contains(&self, e: &Element) -> bool;

    fn mul(&self, a: &Element, b: &Element) -> Element;

    fn inv(&self, a: &Element) -> Element;

    /// Family-specific size parameter used to nest truncation scopes.
    fn level(&self, _e: &Element) -> u64 {
        0
    }

    fn is_finite(&self) -> bool;

    fn is_idempotent(&self, e: &Element) -> bool {
        self.mul(e, e) == *e
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::DomainMismatch { element: e.to_string(), family: self.name() })
        }
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn invert(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.inv(a))
    }

    /// `s*s`, the idempotent of the L-class of `s`.
    fn source_idempotent(&self, s: &Element) -> Element {
        self.mul(&self.inv(s), s)
    }

    /// `ss*`, the idempotent of the R-class of `s`.
    fn range_idempotent(&self, s: &Element) -> Element {
        self.mul(s, &self.inv(s))
    }

    /// D-relation without an explicit scope; only finite semigroups can answer.
    fn d_related_unscoped(&self, _a: &Element, _b: &Element) -> Result<bool> {
        Err(Error::ScopeRequired)
    }
}
