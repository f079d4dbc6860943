use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::element::Element;
use super::finite::FiniteSemigroup;
use crate::error::{Error, Result};

fn default_version() -> u32 {
    1
}

/// On-disk form of a finite inverse semigroup: element labels plus
/// product and inverse tables over their indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcreteDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    pub elements: Vec<Value>,
    pub product: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
}

impl FiniteSemigroup {
    /// Validates a document (shape, associativity, inverse laws, commuting
    /// idempotents) and builds the table it describes.
    pub fn from_document(doc: &ConcreteDocument) -> Result<Self> {
        if doc.version != 1 {
            return Err(Error::Format(format!("unsupported version {}", doc.version)));
        }
        let n = doc.elements.len();
        if n == 0 {
            return Err(Error::InvalidDescriptor("concrete table has no elements".into()));
        }
        if doc.product.len() != n || doc.product.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidDescriptor(format!("product table must be {n}x{n}")));
        }
        if doc.inverse.len() != n {
            return Err(Error::InvalidDescriptor(format!("inverse table must have {n} entries")));
        }
        if doc.product.iter().flatten().chain(&doc.inverse).any(|&v| v >= n) {
            return Err(Error::InvalidDescriptor(format!("table entry outside 0..{n}")));
        }
        let elements: Vec<Element> = doc.elements.iter().map(|v| Element::Label(v.to_string())).collect();
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidDescriptor("duplicate element labels".into()));
        }
        let s = FiniteSemigroup::from_tables(elements, doc.product.clone(), doc.inverse.clone());
        s.check_laws()?;
        Ok(s)
    }

    /// Exports the table; fails for truncated closures or ones too large to tabulate.
    pub fn to_document(&self) -> Result<ConcreteDocument> {
        let n = self.len();
        if !self.is_complete() || !self.has_table() {
            return Err(Error::Format("only complete tabulated semigroups can be exported".into()));
        }
        let missing = || Error::Format("product leaves the table".into());
        let product = (0..n)
            .map(|i| (0..n).map(|j| self.product_index(i, j).ok_or_else(missing)).collect())
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let inverse = (0..n).map(|i| self.inverse_index(i).ok_or_else(missing)).collect::<Result<_>>()?;
        Ok(ConcreteDocument {
            version: 1,
            elements: self.elements().iter().map(Element::to_json).collect(),
            product,
            inverse,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{generate_closure, InverseSemigroup, SemigroupOracle};
    use serde_json::json;

    fn two_element_semilattice() -> ConcreteDocument {
        ConcreteDocument {
            version: 1,
            elements: vec![json!("0"), json!("e")],
            product: vec![vec![0, 0], vec![0, 1]],
            inverse: vec![0, 1],
        }
    }

    #[test]
    fn loads_valid_table() {
        let s = FiniteSemigroup::from_document(&two_element_semilattice()).unwrap();
        assert_eq!(s.len(), 2);
        let e = Element::Label("\"e\"".into());
        assert!(s.is_idempotent(&e));
        assert_eq!(s.identity(), Some(e));
    }

    #[test]
    fn rejects_broken_tables() {
        let mut d = two_element_semilattice();
        d.product[0][1] = 1;
        assert!(FiniteSemigroup::from_document(&d).is_err());
        let mut d = two_element_semilattice();
        d.inverse = vec![1, 0];
        assert!(FiniteSemigroup::from_document(&d).is_err());
        let mut d = two_element_semilattice();
        d.product[1][1] = 2;
        assert!(FiniteSemigroup::from_document(&d).is_err());
    }

    #[test]
    fn non_commuting_idempotents_rejected() {
        // left-zero band on two elements: associative, every element idempotent, ef = e != f = fe
        let d = ConcreteDocument {
            version: 1,
            elements: vec![json!("e"), json!("f")],
            product: vec![vec![0, 0], vec![1, 1]],
            inverse: vec![0, 1],
        };
        let err = FiniteSemigroup::from_document(&d).unwrap_err();
        assert!(err.to_string().contains("commute"));
    }

    #[test]
    fn round_trip_through_json() {
        let o = SemigroupOracle::symmetric_inverse_monoid(2).unwrap();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        let doc = s.to_document().unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: ConcreteDocument = serde_json::from_str(&text).unwrap();
        let t = FiniteSemigroup::from_document(&back).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.to_document().unwrap(), doc);
    }
}
