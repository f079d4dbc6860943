use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// A bijection between two subsets of `{1, .., ground}`.
///
/// Pairs are kept sorted by source, which makes the derived ordering the
/// canonical key order (lexicographic on the sorted `(source, target)` list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    ground: u32,
    pairs: Vec<(u32, u32)>,
}

impl PartialBijection {
    pub fn new(ground: u32, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        if ground == 0 {
            return Err(Error::InvalidElement("ground size must be positive".into()));
        }
        let mut pairs: Vec<(u32, u32)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        let mut targets: Vec<u32> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidElement(format!("source {} mapped twice", w[0].0)));
            }
        }
        for w in targets.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidElement(format!("target {} hit twice", w[0])));
            }
        }
        if let Some(&(s, t)) = pairs.iter().find(|(s, t)| *s == 0 || *t == 0 || *s > ground || *t > ground) {
            return Err(Error::InvalidElement(format!("pair ({s},{t}) outside 1..={ground}")));
        }
        Ok(Self { ground, pairs })
    }

    /// The empty map, i.e. the zero of `I_n`.
    pub fn empty(ground: u32) -> Self {
        Self { ground, pairs: Vec::new() }
    }

    /// Identity on the given subset.
    pub fn identity_on(ground: u32, points: impl IntoIterator<Item = u32>) -> Result<Self> {
        Self::new(ground, points.into_iter().map(|p| (p, p)))
    }

    /// The rank-one map `x -> y`, written `gamma_{y,x}`.
    pub fn gamma(ground: u32, y: u32, x: u32) -> Result<Self> {
        Self::new(ground, [(x, y)])
    }

    /// Total permutation from images of `1..=n` (one-based).
    pub fn permutation(images: &[u32]) -> Result<Self> {
        let n = images.len() as u32;
        Self::new(n, images.iter().enumerate().map(|(i, &t)| (i as u32 + 1, t)))
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn domain(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn image(&self) -> Vec<u32> {
        let mut im: Vec<u32> = self.pairs.iter().map(|p| p.1).collect();
        im.sort_unstable();
        im
    }

    pub fn apply(&self, x: u32) -> Option<u32> {
        self.pairs
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// `self ∘ other`: apply `other` first, on the largest possible domain.
    pub fn compose(&self, other: &Self) -> Self {
        let mut pairs: Vec<(u32, u32)> = other
            .pairs
            .iter()
            .filter_map(|&(s, m)| self.apply(m).map(|t| (s, t)))
            .collect();
        pairs.sort_unstable();
        Self { ground: self.ground, pairs }
    }

    pub fn inverse(&self) -> Self {
        let mut pairs: Vec<(u32, u32)> = self.pairs.iter().map(|&(s, t)| (t, s)).collect();
        pairs.sort_unstable();
        Self { ground: self.ground, pairs }
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairs.iter().all(|(s, t)| s == t)
    }
}

/// An element of one of the supported inverse semigroups, identified by its
/// canonical key. The derived `Ord` is the canonical total order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A partial bijection (symmetric inverse monoid and its subsemigroups).
    Map(PartialBijection),
    /// Bicyclic normal form `q^a p^b`.
    Bicyclic { a: u64, b: u64 },
    /// Munn triple of the free inverse monoid on one generator.
    Munn { a: i64, g: i64, b: i64 },
    /// `(group element, chain value)` in a group × chain product.
    Pair { g: u32, e: i64 },
    /// Element of a chain semilattice under `min`.
    Chain(i64),
    /// Element of an imported concrete table, keyed by its compact JSON text.
    Label(String),
    /// Externally adjoined identity.
    One,
}

impl Element {
    pub fn map(pb: PartialBijection) -> Self {
        Element::Map(pb)
    }

    pub fn as_map(&self) -> Option<&PartialBijection> {
        match self {
            Element::Map(pb) => Some(pb),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Element::Map(pb) => json!(pb.pairs.iter().map(|&(s, t)| [s, t]).collect::<Vec<_>>()),
            Element::Bicyclic { a, b } => json!([a, b]),
            Element::Munn { a, g, b } => json!([a, g, b]),
            Element::Pair { g, e } => json!([g, e]),
            Element::Chain(e) => json!(e),
            Element::Label(s) => serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.clone())),
            Element::One => json!("1"),
        }
    }
}

impl serde::Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl serde::Serialize for PartialBijection {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[u32; 2]> = self.pairs.iter().map(|&(s, t)| [s, t]).collect();
        rows.serialize(serializer)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Label(s) => f.write_str(s),
            other => write!(f, "{}", other.to_json()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(n: u32, pairs: &[(u32, u32)]) -> PartialBijection {
        PartialBijection::new(n, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn rank_one_maps_compose() {
        // gamma_{z,y} . gamma_{y,x} = gamma_{z,x}
        let zy = PartialBijection::gamma(3, 3, 2).unwrap();
        let yx = PartialBijection::gamma(3, 2, 1).unwrap();
        assert_eq!(zy.compose(&yx), PartialBijection::gamma(3, 3, 1).unwrap());
        // mismatched middle point gives the empty map
        assert_eq!(yx.compose(&zy), PartialBijection::empty(3));
    }

    #[test]
    fn inverse_reverses_pairs() {
        let g = PartialBijection::gamma(3, 2, 1).unwrap();
        assert_eq!(g.inverse(), PartialBijection::gamma(3, 1, 2).unwrap());
        let e = PartialBijection::identity_on(3, [1, 3]).unwrap();
        assert_eq!(e.inverse(), e);
    }

    #[test]
    fn rejects_non_injective() {
        assert!(PartialBijection::new(3, [(1, 2), (2, 2)]).is_err());
        assert!(PartialBijection::new(3, [(1, 2), (1, 3)]).is_err());
        assert!(PartialBijection::new(3, [(4, 1)]).is_err());
        assert!(PartialBijection::new(0, []).is_err());
    }

    #[test]
    fn key_order_is_lexicographic_on_pairs() {
        let empty = PartialBijection::empty(2);
        let a = pb(2, &[(1, 1)]);
        let b = pb(2, &[(1, 1), (2, 2)]);
        let c = pb(2, &[(1, 2)]);
        let mut v = vec![c.clone(), b.clone(), empty.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![empty, a, b, c]);
    }

    #[test]
    fn json_keys() {
        let e = Element::Map(pb(3, &[(2, 1), (1, 3)]));
        assert_eq!(e.to_string(), "[[1,3],[2,1]]");
        assert_eq!(Element::Munn { a: -1, g: 0, b: 1 }.to_string(), "[-1,0,1]");
        assert_eq!(Element::Label("\"e\"".into()).to_json(), json!("e"));
    }
}
