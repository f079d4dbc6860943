use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::table::{MetricClass, MetricTable, Scope};
use crate::error::{Error, Result};
use crate::semigroup::{natural_leq, Element, FiniteSemigroup, InverseSemigroup};

/// Length values on a scope; `None` marks an element the construction could
/// not reach (scope exceeded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthFunction {
    scope: Scope,
    values: BTreeMap<Element, Option<u64>>,
}

impl LengthFunction {
    pub fn new(scope: Scope, values: BTreeMap<Element, Option<u64>>) -> Self {
        Self { scope, values }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn get(&self, e: &Element) -> Option<u64> {
        self.values.get(e).copied().flatten()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.values.contains_key(e)
    }

    pub fn values(&self) -> &BTreeMap<Element, Option<u64>> {
        &self.values
    }

    pub fn scope_exceeded(&self) -> Vec<Element> {
        self.values.iter().filter(|(_, v)| v.is_none()).map(|(k, _)| k.clone()).collect()
    }

    /// Checks the length-function axioms on every in-scope element and pair.
    pub fn audit<S: InverseSemigroup + ?Sized>(&self, s: &S) -> LengthAudit {
        let mut audit = LengthAudit::default();
        let known: Vec<(&Element, u64)> = self.values.iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect();
        for &(x, lx) in &known {
            if (lx == 0) != s.is_idempotent(x) {
                audit.zero_iff_idempotent += 1;
            }
            if let Some(li) = self.get(&s.inv(x)) {
                if li != lx {
                    audit.symmetry += 1;
                }
            }
        }
        for &(x, lx) in &known {
            for &(y, ly) in &known {
                if let Some(lxy) = self.get(&s.mul(x, y)) {
                    audit.pairs_checked += 1;
                    if lxy > lx + ly {
                        audit.subadditivity += 1;
                    }
                }
                if ly < lx && s.mul(&s.range_idempotent(x), y) == *x {
                    audit.order_monotone += 1;
                }
            }
        }
        audit
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LengthAudit {
    pub pairs_checked: usize,
    pub zero_iff_idempotent: usize,
    pub symmetry: usize,
    pub subadditivity: usize,
    pub order_monotone: usize,
}

impl LengthAudit {
    pub fn violations(&self) -> usize {
        self.zero_iff_idempotent + self.symmetry + self.subadditivity + self.order_monotone
    }
}

impl Serialize for LengthFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<(&Element, serde_json::Value)> = self
            .values
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Some(n) => serde_json::Value::from(*n),
                    None => serde_json::Value::from("scope_exceeded"),
                };
                (k, v)
            })
            .collect();
        let mut st = serializer.serialize_struct("LengthFunction", 2)?;
        st.serialize_field("scope", &self.scope)?;
        st.serialize_field("values", &rows)?;
        st.end()
    }
}

/// `l(s) = d(s*s, s)`; `None` if `s*s` lies outside the explored class.
pub fn length_from_metric(d: &MetricTable) -> LengthFunction {
    let mut values = BTreeMap::new();
    for c in d.classes() {
        let e = c.position(&c.idempotent);
        for (i, m) in c.members.iter().enumerate() {
            values.insert(m.clone(), e.map(|e| c.d(e, i)));
        }
    }
    LengthFunction { scope: d.scope(), values }
}

/// `d(s, t) = l(ts*)` for `s L t`, infinite otherwise.
pub fn metric_from_length<S: InverseSemigroup + ?Sized>(s: &S, l: &LengthFunction) -> Result<MetricTable> {
    let mut groups: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    for (x, v) in l.values() {
        if v.is_some() {
            groups.entry(s.source_idempotent(x)).or_default().push(x.clone());
        }
    }
    let complete = l.scope() == Scope::Complete;
    let mut classes = Vec::with_capacity(groups.len());
    for (idempotent, members) in groups {
        let n = members.len();
        let mut dist = Vec::with_capacity(n * n);
        for a in &members {
            let ai = s.inv(a);
            for b in &members {
                let ba = s.mul(b, &ai);
                let v = l
                    .get(&ba)
                    .ok_or_else(|| Error::Alignment(format!("l({ba}) is needed for d({a}, {b}) but is not in scope")))?;
                dist.push(v);
            }
        }
        let depth = members.iter().map(|m| l.get(m).unwrap_or(0)).collect();
        let level = members.iter().map(|m| s.level(m)).collect();
        classes.push(MetricClass::new(idempotent, members, depth, level, complete, dist));
    }
    Ok(MetricTable::from_classes(l.scope(), classes))
}

/// Length function from an ascending chain of finite symmetric sets.
///
/// `chain[n-1]` plays `T_n` (the last set repeats). The chain is augmented
/// step by step, `T'_n = T_n ∪ T'_{n-1} ∪ ⋃ T'_i T'_{n-i}`, up to `cap` steps;
/// then `l(s)` is the least `n` with `s` below some element of `T'_n`, and
/// idempotents get 0. Elements never reached are marked scope-exceeded.
pub fn filtration_length(s: &FiniteSemigroup, chain: &[Vec<Element>], cap: u64) -> Result<LengthFunction> {
    if chain.is_empty() {
        return Err(Error::InvalidElement("filtration chain is empty".into()));
    }
    let n = s.len();
    let mut ids: Vec<BTreeSet<usize>> = Vec::with_capacity(chain.len());
    for t in chain {
        let mut set = BTreeSet::new();
        for x in t {
            let i = s.index_of(x).ok_or_else(|| Error::InvalidElement(format!("{x} is not in the semigroup")))?;
            set.insert(i);
            let inv = s.inverse_index(i).ok_or_else(|| Error::InvalidElement(format!("{x}* leaves the table")))?;
            if !t.contains(s.element(inv)) {
                return Err(Error::InvalidElement(format!("chain set is not symmetric at {x}")));
            }
        }
        ids.push(set);
    }
    let mut length: Vec<Option<u64>> = (0..n).map(|i| s.is_idempotent_index(i).then_some(0)).collect();
    let mut below: HashMap<usize, Vec<usize>> = HashMap::new();
    for t in 0..n {
        let v: Vec<usize> = (0..n)
            .filter(|&x| natural_leq(s, s.element(x), s.element(t)).unwrap_or(false))
            .collect();
        below.insert(t, v);
    }
    let mut augmented: Vec<BTreeSet<usize>> = Vec::new();
    for step in 1..=cap {
        let k = step as usize;
        let mut cur = ids[(k - 1).min(ids.len() - 1)].clone();
        if let Some(prev) = augmented.last() {
            cur.extend(prev.iter().copied());
        }
        for i in 1..k {
            for &a in &augmented[i - 1] {
                for &b in &augmented[k - i - 1] {
                    if let Some(ab) = s.product_index(a, b) {
                        cur.insert(ab);
                    }
                }
            }
        }
        for &t in &cur {
            for &x in &below[&t] {
                if length[x].is_none() {
                    length[x] = Some(step);
                }
            }
        }
        let stable = augmented.last() == Some(&cur) && k >= ids.len();
        augmented.push(cur);
        if stable || length.iter().all(Option::is_some) {
            break;
        }
    }
    let values = (0..n).map(|i| (s.element(i).clone(), length[i])).collect();
    let scope = if s.is_complete() { Scope::Complete } else { Scope::Ball { depth: 0, radius: None } };
    Ok(LengthFunction { scope, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{complete_word_metric, WeightedGenerators};
    use crate::semigroup::{generate_closure, ChainKind, GroupTable, SemigroupOracle};

    fn z10() -> (SemigroupOracle, FiniteSemigroup) {
        let o = SemigroupOracle::product(GroupTable::cyclic(10).unwrap(), ChainKind::Finite(1));
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        (o, s)
    }

    #[test]
    fn cyclic_filtration() {
        let (_, s) = z10();
        let one = Element::Pair { g: 1, e: 0 };
        let nine = Element::Pair { g: 9, e: 0 };
        let l = filtration_length(&s, &[vec![one, nine]], 20).unwrap();
        assert_eq!(l.get(&Element::Pair { g: 3, e: 0 }), Some(3));
        assert_eq!(l.get(&Element::Pair { g: 5, e: 0 }), Some(5));
        assert_eq!(l.get(&Element::Pair { g: 0, e: 0 }), Some(0));
        assert_eq!(l.audit(&s).violations(), 0);
    }

    #[test]
    fn filtration_cap_marks_scope_exceeded() {
        let (_, s) = z10();
        let l = filtration_length(&s, &[vec![Element::Pair { g: 1, e: 0 }, Element::Pair { g: 9, e: 0 }]], 2).unwrap();
        assert_eq!(l.get(&Element::Pair { g: 3, e: 0 }), None);
        assert!(l.scope_exceeded().contains(&Element::Pair { g: 3, e: 0 }));
    }

    #[test]
    fn filtration_on_i3_is_subadditive() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        let gens: Vec<Element> = o.generators(0).iter().flat_map(|g| [g.clone(), o.inv(g)]).collect();
        let l = filtration_length(&s, &[gens], 10).unwrap();
        assert!(l.scope_exceeded().is_empty());
        let audit = l.audit(&s);
        assert!(audit.pairs_checked > 1000);
        assert_eq!(audit.violations(), 0);
    }

    #[test]
    fn prop_3_6_round_trip_on_i3() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        let gens = WeightedGenerators::unit(&s, &o.generators(0)).unwrap();
        let d = complete_word_metric(&s, &gens).unwrap();
        let l = length_from_metric(&d);
        assert_eq!(l.audit(&s).violations(), 0);
        let d2 = metric_from_length(&s, &l).unwrap();
        assert_eq!(d2, d);
        assert_eq!(length_from_metric(&d2), l);
        for e in s.elements() {
            assert_eq!(l.get(e), l.get(&s.inv(e)));
        }
    }

    #[test]
    fn rank_one_generator_in_i2() {
        let o = SemigroupOracle::symmetric_inverse_monoid(2).unwrap();
        let g = o.pb(&[(1, 2)]).unwrap();
        let s = generate_closure(&o, &[g.clone()], 10).unwrap();
        let d = complete_word_metric(&s, &WeightedGenerators::unit(&s, &[g.clone()]).unwrap()).unwrap();
        let l = length_from_metric(&d);
        assert_eq!(l.get(&g), Some(1));
        assert_eq!(l.get(&o.pb(&[(1, 1)]).unwrap()), Some(0));
    }
}
