use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;
use serde_json::json;

use super::length::LengthFunction;
use super::table::{Dist, MetricTable, Scope};
use super::WeightedGenerators;
use crate::coarse::{CoarseVerdict, Property, Status};
use crate::semigroup::{natural_leq, Element, InverseSemigroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found { witness: Vec<Element> },
    NotFoundAtScale { uncovered: usize, example: Option<(Element, Element)> },
}

/// A properness witness search at one radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSearch {
    pub radius: u64,
    pub pairs: usize,
    pub candidates: usize,
    #[serde(flatten)]
    pub outcome: WitnessOutcome,
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&[Element]> {
        match &self.outcome {
            WitnessOutcome::Found { witness } => Some(witness),
            WitnessOutcome::NotFoundAtScale { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubinvarianceAudit {
    pub triples_checked: usize,
    pub violations: usize,
    pub examples: Vec<[Element; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomAudit {
    pub triples_checked: usize,
    pub zero_diagonal: bool,
    pub symmetric: bool,
    pub positive_off_diagonal: bool,
    pub triangle_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub scope: Scope,
    pub right_subinvariance: SubinvarianceAudit,
    pub axioms: AxiomAudit,
    pub properness: Vec<WitnessSearch>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.right_subinvariance.violations == 0
            && self.axioms.zero_diagonal
            && self.axioms.symmetric
            && self.axioms.positive_off_diagonal
            && self.axioms.triangle_violations == 0
    }
}

/// Candidate elements for witnesses. On a truncated scope only the inner
/// half (level `<= depth / 2`) is eligible, so a witness cannot lean on
/// elements at the edge of the truncation.
fn candidate_pool(d: &MetricTable) -> Vec<Element> {
    let all = d.elements();
    match d.scope() {
        Scope::Complete => all,
        Scope::Ball { depth, .. } => all.into_iter().filter(|e| d.level(e).unwrap_or(0) <= depth / 2).collect(),
    }
}

fn close_pairs(d: &MetricTable, r: u64) -> Vec<(Element, Element)> {
    let mut pairs = Vec::new();
    for c in d.classes() {
        for i in 0..c.len() {
            for j in 0..c.len() {
                if i != j && c.d(i, j) <= r {
                    pairs.push((c.members[i].clone(), c.members[j].clone()));
                }
            }
        }
    }
    pairs.sort();
    pairs
}

/// Greedy set cover: repeatedly take the candidate covering the most
/// uncovered items, ties to the least key.
fn greedy_cover(candidates: &[Element], items: usize, covers: impl Fn(&Element, usize) -> bool) -> (Vec<Element>, Vec<usize>) {
    let sets: Vec<Vec<usize>> = candidates.iter().map(|c| (0..items).filter(|&i| covers(c, i)).collect()).collect();
    let mut covered = vec![false; items];
    let mut chosen = Vec::new();
    loop {
        let best = sets
            .iter()
            .enumerate()
            .map(|(k, set)| (set.iter().filter(|&&i| !covered[i]).count(), Reverse(k)))
            .max();
        match best {
            Some((gain, Reverse(k))) if gain > 0 => {
                for &i in &sets[k] {
                    covered[i] = true;
                }
                chosen.push(candidates[k].clone());
            }
            _ => break,
        }
    }
    chosen.sort();
    let uncovered = (0..items).filter(|&i| !covered[i]).collect();
    (chosen, uncovered)
}

/// Finite `F` with `y ∈ Fx` for every pair at distance `<= r`.
pub fn properness_witness<S: InverseSemigroup + ?Sized>(s: &S, d: &MetricTable, r: u64) -> WitnessSearch {
    let pairs = close_pairs(d, r);
    let pool = candidate_pool(d);
    let (chosen, uncovered) = greedy_cover(&pool, pairs.len(), |c, i| s.mul(c, &pairs[i].0) == pairs[i].1);
    let outcome = if uncovered.is_empty() {
        WitnessOutcome::Found { witness: chosen }
    } else {
        WitnessOutcome::NotFoundAtScale { uncovered: uncovered.len(), example: Some(pairs[uncovered[0]].clone()) }
    };
    WitnessSearch { radius: r, pairs: pairs.len(), candidates: pool.len(), outcome }
}

/// Checks a proposed witness `F` against every pair at distance `<= r`.
pub fn validate_witness<S: InverseSemigroup + ?Sized>(s: &S, d: &MetricTable, f: &[Element], r: u64) -> WitnessSearch {
    let pairs = close_pairs(d, r);
    let bad: Vec<usize> = (0..pairs.len())
        .filter(|&i| !f.iter().any(|t| s.mul(t, &pairs[i].0) == pairs[i].1))
        .collect();
    let mut witness = f.to_vec();
    witness.sort();
    let outcome = if bad.is_empty() {
        WitnessOutcome::Found { witness }
    } else {
        WitnessOutcome::NotFoundAtScale { uncovered: bad.len(), example: Some(pairs[bad[0]].clone()) }
    };
    WitnessSearch { radius: r, pairs: pairs.len(), candidates: f.len(), outcome }
}

/// Every product of generators of total weight `<= r`.
pub fn word_ball_witness<S: InverseSemigroup + ?Sized>(s: &S, gens: &WeightedGenerators, r: u64) -> Vec<Element> {
    let mut best: BTreeMap<Element, u64> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    for (g, w) in gens.entries() {
        if *w <= r && best.get(g).is_none_or(|&b| *w < b) {
            best.insert(g.clone(), *w);
            heap.push(Reverse((*w, g.clone())));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if best.get(&u) != Some(&d) {
            continue;
        }
        for (g, w) in gens.entries() {
            let nd = d + w;
            if nd > r {
                continue;
            }
            let v = s.mul(g, &u);
            if best.get(&v).is_none_or(|&b| nd < b) {
                best.insert(v.clone(), nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    best.into_keys().collect()
}

/// Right subinvariance on in-table triples, the metric axioms, and a
/// properness witness for each `r` in `1..=r_max`.
pub fn validate_metric<S: InverseSemigroup + ?Sized>(s: &S, d: &MetricTable, r_max: u64) -> ValidationReport {
    let elems = d.elements();
    let mut sub = SubinvarianceAudit::default();
    for c in d.classes() {
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                let (a, b) = (&c.members[i], &c.members[j]);
                for x in &elems {
                    let (ax, bx) = (s.mul(a, x), s.mul(b, x));
                    if let Some(dx) = d.distance(&ax, &bx) {
                        sub.triples_checked += 1;
                        if dx > Dist::Finite(c.d(i, j)) {
                            sub.violations += 1;
                            if sub.examples.len() < 5 {
                                sub.examples.push([a.clone(), b.clone(), x.clone()]);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut axioms = AxiomAudit { zero_diagonal: true, symmetric: true, positive_off_diagonal: true, ..Default::default() };
    for c in d.classes() {
        let n = c.len();
        for i in 0..n {
            axioms.zero_diagonal &= c.d(i, i) == 0;
            for j in 0..n {
                axioms.symmetric &= c.d(i, j) == c.d(j, i);
                if i != j {
                    axioms.positive_off_diagonal &= c.d(i, j) >= 1;
                }
                for k in 0..n {
                    axioms.triples_checked += 1;
                    if c.d(i, k) > c.d(i, j) + c.d(j, k) {
                        axioms.triangle_violations += 1;
                    }
                }
            }
        }
    }
    let properness = (1..=r_max).map(|r| properness_witness(s, d, r)).collect();
    ValidationReport { scope: d.scope(), right_subinvariance: sub, axioms, properness }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderReport {
    pub radius: u64,
    pub cylinder: Vec<Element>,
    pub fub: WitnessOutcome,
}

/// `C_r = {s : 0 < l(s) <= r}` in scope, and a finite upper bound for it in
/// the natural partial order.
pub fn cylinder_and_fub<S: InverseSemigroup + ?Sized>(s: &S, l: &LengthFunction, r: u64) -> CylinderReport {
    let cylinder: Vec<Element> = l
        .values()
        .iter()
        .filter(|(_, v)| matches!(v, Some(n) if *n > 0 && *n <= r))
        .map(|(k, _)| k.clone())
        .collect();
    let pool: Vec<Element> = match l.scope() {
        Scope::Complete => l.values().keys().cloned().collect(),
        Scope::Ball { depth, .. } => l.values().keys().filter(|e| s.level(e) <= depth / 2).cloned().collect(),
    };
    let (chosen, uncovered) =
        greedy_cover(&pool, cylinder.len(), |m, i| natural_leq(s, &cylinder[i], m).unwrap_or(false));
    let fub = if uncovered.is_empty() {
        WitnessOutcome::Found { witness: chosen }
    } else {
        let c = cylinder[uncovered[0]].clone();
        WitnessOutcome::NotFoundAtScale { uncovered: uncovered.len(), example: Some((c.clone(), c)) }
    };
    CylinderReport { radius: r, cylinder, fub }
}

/// Supremum of finite distances, tracked over level sub-scopes up to the
/// scope depth; a supremum still rising over the upper half is evidence
/// against coarse triviality.
pub fn coarse_triviality(d: &MetricTable) -> CoarseVerdict {
    let top = match d.scope() {
        Scope::Complete => d.max_level(),
        Scope::Ball { depth, .. } => depth.min(d.max_level()),
    };
    let mut by_level = vec![0u64; top as usize + 1];
    for c in d.classes() {
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                let lv = c.level[i].max(c.level[j]);
                if lv <= top {
                    by_level[lv as usize] = by_level[lv as usize].max(c.d(i, j));
                }
            }
        }
    }
    for k in 1..by_level.len() {
        by_level[k] = by_level[k].max(by_level[k - 1]);
    }
    let sup = d.classes().iter().map(|c| c.diameter()).max().unwrap_or(0);
    let half = by_level[by_level.len() / 2];
    let at_top = *by_level.last().unwrap_or(&0);
    let status = if d.is_complete() {
        Status::Established
    } else {
        Status::EvidenceAtScale { scale: top, consistent: at_top == half }
    };
    CoarseVerdict {
        property: Property::CoarselyTrivial,
        status,
        statistics: json!({ "supremum": sup, "supremum_by_level": by_level }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{complete_word_metric, length_from_metric, weighted_word_metric};
    use crate::semigroup::{generate_closure, ChainKind, GroupTable, SemigroupOracle};

    fn product_tables(depth: u64) -> (SemigroupOracle, MetricTable, MetricTable) {
        let s = SemigroupOracle::product(GroupTable::cyclic(2).unwrap(), ChainKind::Nat);
        let gens = s.generators(depth);
        let g1 = WeightedGenerators::unit(&s, &gens).unwrap();
        let g2 = WeightedGenerators::symmetric(&s, gens.iter().map(|g| (g.clone(), s.level(g)))).unwrap();
        let base = s.scope_basepoints(depth).unwrap();
        let d1 = weighted_word_metric(&s, &g1, &base, Some(depth * 2)).unwrap();
        let d2 = weighted_word_metric(&s, &g2, &base, Some(depth * 2)).unwrap();
        (s, d1, d2)
    }

    #[test]
    fn d2_is_proper_d1_is_not() {
        let (s, d1, d2) = product_tables(50);
        for r in 1..=5 {
            let w = properness_witness(&s, &d2, r);
            assert!(w.witness().is_some(), "r = {r}");
            let f: Vec<Element> = d2
                .class_of(&Element::Pair { g: 0, e: r as i64 })
                .unwrap()
                .members
                .clone();
            assert!(validate_witness(&s, &d2, &f, r).witness().is_some());
        }
        let w1 = properness_witness(&s, &d1, 1);
        assert!(matches!(w1.outcome, WitnessOutcome::NotFoundAtScale { .. }));
    }

    #[test]
    fn finite_word_ball_is_a_witness() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        let gens = WeightedGenerators::unit(&s, &o.generators(0)).unwrap();
        let d = complete_word_metric(&s, &gens).unwrap();
        let report = validate_metric(&s, &d, 3);
        assert!(report.passed(), "{report:?}");
        assert!(report.properness.iter().all(|w| w.witness().is_some()));
        for r in 1..=3 {
            let ball = word_ball_witness(&s, &gens, r);
            assert!(validate_witness(&s, &d, &ball, r).witness().is_some());
        }
    }

    #[test]
    fn bicyclic_cylinder_bounded_by_p_and_q() {
        let b = SemigroupOracle::bicyclic();
        let gens = WeightedGenerators::unit(&b, &b.generators(0)).unwrap();
        let d = weighted_word_metric(&b, &gens, &b.scope_basepoints(10).unwrap(), Some(10)).unwrap();
        let l = length_from_metric(&d);
        let rep = cylinder_and_fub(&b, &l, 1);
        assert!(rep.cylinder.iter().all(|e| matches!(e, Element::Bicyclic { a, b } if a.abs_diff(*b) == 1)));
        assert_eq!(
            rep.fub,
            WitnessOutcome::Found { witness: vec![SemigroupOracle::bicyclic_p(), SemigroupOracle::bicyclic_q()] }
        );
    }

    #[test]
    fn semilattice_has_empty_cylinder() {
        let c = SemigroupOracle::chain(ChainKind::Nat);
        let d = weighted_word_metric(&c, &WeightedGenerators::unit(&c, &[]).unwrap(), &c.scope_basepoints(10).unwrap(), Some(5))
            .unwrap();
        let l = length_from_metric(&d);
        assert!(cylinder_and_fub(&c, &l, 3).cylinder.is_empty());
        let v = coarse_triviality(&d);
        assert_eq!(v.statistics["supremum"], 0);
    }

    #[test]
    fn triviality_profiles() {
        let (_, d1, _) = product_tables(20);
        let v = coarse_triviality(&d1);
        assert_eq!(v.statistics["supremum"], 1);
        assert!(matches!(v.status, Status::EvidenceAtScale { consistent: true, .. }));

        let b = SemigroupOracle::bicyclic();
        let gens = WeightedGenerators::unit(&b, &b.generators(0)).unwrap();
        let d = weighted_word_metric(&b, &gens, &b.scope_basepoints(12).unwrap(), Some(12)).unwrap();
        let v = coarse_triviality(&d);
        assert!(v.statistics["supremum"].as_u64().unwrap() >= 11);
        assert!(matches!(v.status, Status::EvidenceAtScale { consistent: false, .. }));
    }
}
