use serde::Serialize;

use super::table::{complete_word_metric, Dist, MetricTable};
use super::{length_from_metric, WeightedGenerators};
use crate::error::Result;
use crate::semigroup::{generate_closure, Element, FiniteSemigroup, InverseSemigroup, SemigroupOracle};

/// Outcome of one property check: how many instances were examined and the
/// first few counterexamples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: usize,
    pub examples: Vec<Vec<Element>>,
}

impl LemmaReport {
    pub(crate) fn record(&mut self, ok: bool, example: impl FnOnce() -> Vec<Element>) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < 5 {
                self.examples.push(example());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(&mut self, other: LemmaReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        for e in other.examples {
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
    }
}

/// `d(t, st) <= d(s*s, s)` whenever `t L st`, over all in-table `s, t`.
pub fn check_subinvariance_bound<S: InverseSemigroup + ?Sized>(s: &S, d: &MetricTable) -> LemmaReport {
    let mut report = LemmaReport::default();
    let elems = d.elements();
    for x in &elems {
        let Some(Dist::Finite(lx)) = d.distance(&s.source_idempotent(x), x) else {
            continue;
        };
        for t in &elems {
            let xt = s.mul(x, t);
            if let Some(Dist::Finite(v)) = d.distance(t, &xt) {
                report.record(v <= lx, || vec![x.clone(), t.clone()]);
            }
        }
    }
    report
}

/// `t -> ts*` maps `L_s` bijectively and isometrically onto `L_{s*}`.
pub fn check_inverse_isometry<S: InverseSemigroup + ?Sized>(s: &S, d: &MetricTable) -> LemmaReport {
    let mut report = LemmaReport::default();
    for c in d.classes() {
        let Some(x) = c.members.first() else { continue };
        let xi = s.inv(x);
        let images: Vec<Element> = c.members.iter().map(|t| s.mul(t, &xi)).collect();
        let Some(target) = d.class_of(&images[0]) else { continue };
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        report.record(
            sorted.len() == c.len() && target.len() == c.len() && sorted == target.members,
            || vec![x.clone()],
        );
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                let ok = d.distance(&images[i], &images[j]) == Some(Dist::Finite(c.d(i, j)));
                report.record(ok, || vec![c.members[i].clone(), c.members[j].clone(), x.clone()]);
            }
        }
    }
    report
}

/// For D-related classes `L_e`, `L_f`, the map `u -> u t*` with `t*t = e`,
/// `tt* = f` is an isometric bijection. `t` is the least such element.
pub fn check_d_class_isometry(s: &FiniteSemigroup, d: &MetricTable) -> LemmaReport {
    let mut report = LemmaReport::default();
    let classes = d.classes();
    for a in classes {
        for b in classes {
            let t = s
                .elements()
                .iter()
                .find(|t| s.source_idempotent(t) == a.idempotent && s.range_idempotent(t) == b.idempotent);
            let Some(t) = t else { continue };
            let ti = s.inv(t);
            let images: Vec<Element> = a.members.iter().map(|u| s.mul(u, &ti)).collect();
            let mut sorted = images.clone();
            sorted.sort();
            report.record(sorted == b.members, || vec![a.idempotent.clone(), b.idempotent.clone()]);
            for i in 0..a.len() {
                for j in (i + 1)..a.len() {
                    let ok = d.distance(&images[i], &images[j]) == Some(Dist::Finite(a.d(i, j)));
                    report.record(ok, || vec![a.members[i].clone(), a.members[j].clone(), t.clone()]);
                }
            }
        }
    }
    report
}

/// Subsemigroup `T = <A>` of a complete `S`, weighted by `w(a) = l_S(a)`
/// (at least 1), is metrically dominated: `d_T >= d_S` on every pair.
pub fn check_domination(
    oracle: &SemigroupOracle,
    d_s: &MetricTable,
    a: &[Element],
    cap: usize,
) -> Result<LemmaReport> {
    let l = length_from_metric(d_s);
    let t = generate_closure(oracle, a, cap)?;
    let weights = a.iter().map(|x| (x.clone(), l.get(x).unwrap_or(1).max(1)));
    let gens = WeightedGenerators::symmetric(&t, weights)?;
    let d_t = complete_word_metric(&t, &gens)?;
    let mut report = LemmaReport::default();
    for c in d_t.classes() {
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                let ds = d_s.distance(&c.members[i], &c.members[j]);
                let ok = matches!(ds, Some(Dist::Finite(v)) if v <= c.d(i, j));
                report.record(ok, || vec![c.members[i].clone(), c.members[j].clone()]);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i3_metric() -> (SemigroupOracle, FiniteSemigroup, MetricTable) {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        let gens = WeightedGenerators::unit(&s, &o.generators(0)).unwrap();
        let d = complete_word_metric(&s, &gens).unwrap();
        (o, s, d)
    }

    #[test]
    fn lemma_checks_on_i3() {
        let (_, s, d) = i3_metric();
        let r1 = check_subinvariance_bound(&s, &d);
        assert!(r1.checked > 100 && r1.passed(), "{r1:?}");
        let r3 = check_inverse_isometry(&s, &d);
        assert!(r3.passed(), "{r3:?}");
        let r5 = check_d_class_isometry(&s, &d);
        assert!(r5.checked > 50 && r5.passed(), "{r5:?}");
    }

    #[test]
    fn domination_by_rank_one_subsemigroup() {
        let (o, _, d) = i3_metric();
        let a = vec![o.pb(&[(1, 2)]).unwrap(), o.pb(&[(2, 3)]).unwrap()];
        let r = check_domination(&o, &d, &a, 1000).unwrap();
        assert!(r.checked > 0 && r.passed(), "{r:?}");
    }

    #[test]
    fn doubled_weights_stay_isometric() {
        let (_, s, d) = i3_metric();
        let doubled = {
            let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
            let g = WeightedGenerators::unit(&s, &o.generators(0)).unwrap().scaled(2);
            complete_word_metric(&s, &g).unwrap()
        };
        assert!(check_inverse_isometry(&s, &doubled).passed());
        assert_ne!(doubled, d);
    }
}
