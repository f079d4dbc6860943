use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::element::Element;
use super::finite::FiniteSemigroup;
use super::InverseSemigroup;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    L,
    R,
    D,
}

/// Natural partial order: `a <= b` iff `a a* b = a`.
pub fn natural_leq<S: InverseSemigroup + ?Sized>(s: &S, a: &Element, b: &Element) -> Result<bool> {
    s.check(a)?;
    s.check(b)?;
    Ok(s.mul(&s.range_idempotent(a), b) == *a)
}

/// Decides `a L b`, `a R b` or `a D b`.
///
/// L and R only need the idempotents `s*s` and `ss*`. D searches `scope` for
/// an intermediate `u` with `a L u R b`; without a scope only finite
/// semigroups can answer.
pub fn green_related<S: InverseSemigroup + ?Sized>(
    s: &S,
    a: &Element,
    b: &Element,
    rel: Relation,
    scope: Option<&FiniteSemigroup>,
) -> Result<bool> {
    s.check(a)?;
    s.check(b)?;
    match rel {
        Relation::L => Ok(s.source_idempotent(a) == s.source_idempotent(b)),
        Relation::R => Ok(s.range_idempotent(a) == s.range_idempotent(b)),
        Relation::D => match scope {
            Some(scope) => d_related_in(s, scope, a, b),
            None => s.d_related_unscoped(a, b),
        },
    }
}

pub(crate) fn d_related_in<S: InverseSemigroup + ?Sized>(
    s: &S,
    scope: &FiniteSemigroup,
    a: &Element,
    b: &Element,
) -> Result<bool> {
    let la = s.source_idempotent(a);
    let rb = s.range_idempotent(b);
    Ok(scope
        .elements()
        .iter()
        .filter(|u| s.contains(u))
        .any(|u| s.source_idempotent(u) == la && s.range_idempotent(u) == rb))
}

/// Class ids of every element of a finite semigroup, numbered in order of
/// first appearance.
#[derive(Clone, Debug, Serialize)]
pub struct GreenTable {
    pub l: Vec<usize>,
    pub r: Vec<usize>,
    pub d: Vec<usize>,
}

fn number_by<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut seen = HashMap::new();
    keys.map(|k| {
        let next = seen.len();
        *seen.entry(k).or_insert(next)
    })
    .collect()
}

impl GreenTable {
    pub fn new(s: &FiniteSemigroup) -> Self {
        let l = number_by(s.elements().iter().map(|e| s.source_idempotent(e)));
        let r = number_by(s.elements().iter().map(|e| s.range_idempotent(e)));
        let nl = l.iter().max().map_or(0, |m| m + 1);
        let mut uf = UnionFind::<usize>::new(nl);
        let mut first_l_of_r: HashMap<usize, usize> = HashMap::new();
        for (i, &ri) in r.iter().enumerate() {
            let li = *first_l_of_r.entry(ri).or_insert(l[i]);
            uf.union(li, l[i]);
        }
        let d = number_by(l.iter().map(|&li| uf.find(li)));
        Self { l, r, d }
    }

    pub fn related(&self, rel: Relation, i: usize, j: usize) -> bool {
        let ids = match rel {
            Relation::L => &self.l,
            Relation::R => &self.r,
            Relation::D => &self.d,
        };
        ids[i] == ids[j]
    }

    pub fn class_count(&self, rel: Relation) -> usize {
        let ids = match rel {
            Relation::L => &self.l,
            Relation::R => &self.r,
            Relation::D => &self.d,
        };
        ids.iter().max().map_or(0, |m| m + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{adjoin_identity, generate_closure, SemigroupOracle};

    #[test]
    fn rank_one_maps_in_i3() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let g = |y, x| o.pb(&[(x, y)]).unwrap();
        // same domain: L-related
        assert!(green_related(&o, &g(1, 2), &g(3, 2), Relation::L, None).unwrap());
        assert!(!green_related(&o, &g(1, 2), &g(1, 3), Relation::L, None).unwrap());
        assert!(green_related(&o, &g(1, 2), &g(1, 3), Relation::R, None).unwrap());
        assert!(green_related(&o, &g(1, 2), &g(3, 1), Relation::D, None).unwrap());
        let id12 = o.pb(&[(1, 1), (2, 2)]).unwrap();
        assert!(!green_related(&o, &g(1, 2), &id12, Relation::D, None).unwrap());
    }

    #[test]
    fn natural_order_on_restrictions() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let big = o.pb(&[(1, 2), (2, 3)]).unwrap();
        let small = o.pb(&[(1, 2)]).unwrap();
        assert!(natural_leq(&o, &small, &big).unwrap());
        assert!(!natural_leq(&o, &big, &small).unwrap());
    }

    #[test]
    fn bicyclic_d_needs_scope() {
        let b = SemigroupOracle::bicyclic();
        let x = Element::Bicyclic { a: 2, b: 0 };
        let y = Element::Bicyclic { a: 0, b: 3 };
        assert!(green_related(&b, &x, &y, Relation::D, None).is_err());
        let scope = generate_closure(&b, &b.generators(0), 200).unwrap();
        assert!(green_related(&b, &x, &y, Relation::D, Some(&scope)).unwrap());
        assert!(green_related(&b, &x, &Element::Bicyclic { a: 2, b: 7 }, Relation::R, None).unwrap());
    }

    #[test]
    fn table_counts_for_i3() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &o.generators(0), 1000).unwrap();
        let t = GreenTable::new(&s);
        // one L-class per domain subset, one D-class per rank
        assert_eq!(t.class_count(Relation::L), 8);
        assert_eq!(t.class_count(Relation::R), 8);
        assert_eq!(t.class_count(Relation::D), 4);
        let s1 = adjoin_identity(&s);
        let t1 = GreenTable::new(&s1);
        assert_eq!(t1.class_count(Relation::D), 5);
    }

    #[test]
    fn concrete_d_via_own_table() {
        let o = SemigroupOracle::symmetric_inverse_monoid(2).unwrap();
        let g = o.pb(&[(1, 2)]).unwrap();
        let s = generate_closure(&o, &[g.clone()], 10).unwrap();
        let e11 = o.pb(&[(1, 1)]).unwrap();
        assert!(s.d_related_unscoped(&g, &e11).unwrap());
        let zero = o.pb(&[]).unwrap();
        assert!(!s.d_related_unscoped(&g, &zero).unwrap());
    }
}
