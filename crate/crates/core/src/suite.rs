//! Seeded property runs over small corpora, each producing a JSON report.

use std::collections::BTreeSet;

use ndarray::Array2;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coarse::{asdim0_evidence, coarse_profile, profile_growth, r_components, revalidate_witness, sparse_evidence, Witness};
use crate::embed::{cross_check, embed_space, verify_distortion, Colorer, FiniteMetricSpace};
use crate::error::Result;
use crate::metric::{
    check_d_class_isometry, check_inverse_isometry, check_subinvariance_bound, complete_word_metric,
    length_from_metric, metric_from_length, properness_witness, validate_witness, weighted_word_metric, Dist,
    LemmaReport, MetricTable, WeightedGenerators,
};
use crate::roe::{decompose_band, propagation, BandOperator, Choice, Matrix};
use crate::semigroup::{
    generate_closure, ChainKind, Element, FiniteSemigroup, GreenTable, GroupTable, InverseSemigroup,
    PartialBijection, Relation, SemigroupOracle,
};

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
}

pub fn run(criterion: u8, seed: u64) -> Result<CriterionReport> {
    match criterion {
        1 => closure_exactness(),
        2 => length_round_trip(seed),
        3 => lemma_suite(seed),
        4 => distortion(seed),
        5 => band_reconstruction(seed),
        6 => product_example(),
        7 => separating_example(seed),
        8 => determinism(seed),
        other => Err(crate::Error::InvalidDescriptor(format!("no criterion {other}"))),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    CRITERIA.iter().map(|&c| run(c, seed)).collect()
}

fn report(criterion: u8, name: &'static str, passed: bool, details: Value) -> Result<CriterionReport> {
    Ok(CriterionReport { criterion, name, passed, details })
}

fn all_partial_bijections(n: u32) -> Vec<PartialBijection> {
    // every injective partial map as a choice of image (or none) per point
    let mut out = vec![Vec::<(u32, u32)>::new()];
    for x in 1..=n {
        let mut next = Vec::new();
        for pairs in &out {
            next.push(pairs.clone());
            for y in 1..=n {
                if pairs.iter().all(|&(_, t)| t != y) {
                    let mut p = pairs.clone();
                    p.push((x, y));
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|p| PartialBijection::new(n, p).expect("injective by construction")).collect()
}

fn closure_exactness() -> Result<CriterionReport> {
    let o = SemigroupOracle::symmetric_inverse_monoid(3)?;
    let gens = vec![
        Element::map(PartialBijection::permutation(&[2, 3, 1])?),
        Element::map(PartialBijection::permutation(&[2, 1, 3])?),
        Element::map(PartialBijection::identity_on(3, [1, 2])?),
    ];
    let s = generate_closure(&o, &gens, 1000)?;
    let green = GreenTable::new(&s);
    let d_classes = green.class_count(Relation::D);
    let ranks: BTreeSet<usize> = s.elements().iter().filter_map(|e| e.as_map().map(|m| m.rank())).collect();
    let closed: BTreeSet<Element> = s.elements().iter().cloned().collect();
    let brute: BTreeSet<Element> = all_partial_bijections(3).into_iter().map(Element::map).collect();
    let passed = s.is_complete() && s.len() == 34 && d_classes == 4 && ranks.len() == 4 && closed == brute;
    report(
        1,
        "closure exactness",
        passed,
        json!({"elements": s.len(), "brute_force": brute.len(), "d_classes": d_classes, "ranks": ranks, "agree": closed == brute}),
    )
}

fn random_partial_bijection(rng: &mut ChaCha8Rng, n: u32) -> PartialBijection {
    let mut domain: Vec<u32> = (1..=n).filter(|_| rng.gen_bool(0.75)).collect();
    domain.sort();
    let mut images: Vec<u32> = (1..=n).collect();
    images.shuffle(rng);
    PartialBijection::new(n, domain.iter().zip(&images).map(|(&x, &y)| (x, y))).expect("injective")
}

struct Sample {
    semigroup: FiniteSemigroup,
    metric: MetricTable,
    generators: usize,
    weighted: bool,
}

/// 100 random subsemigroups of `I_4`, the first half with unit weights and
/// the rest with weights drawn from `1..=5`.
fn i4_corpus(seed: u64) -> Result<Vec<Sample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = SemigroupOracle::symmetric_inverse_monoid(4)?;
    let mut out = Vec::new();
    for k in 0..100 {
        let count = rng.gen_range(1..=3);
        let gens: Vec<Element> = (0..count).map(|_| Element::map(random_partial_bijection(&mut rng, 4))).collect();
        let s = generate_closure(&o, &gens, 4096)?;
        let weighted = k >= 50;
        let mut entries: Vec<(Element, u64)> = Vec::new();
        for g in &gens {
            let w = if weighted { rng.gen_range(1..=5) } else { 1 };
            let gi = s.inv(g);
            if !entries.iter().any(|(x, _)| x == g || *x == gi) {
                entries.push((g.clone(), w));
            }
        }
        let w = WeightedGenerators::symmetric(&s, entries)?;
        let metric = complete_word_metric(&s, &w)?;
        out.push(Sample { semigroup: s, metric, generators: count, weighted });
    }
    Ok(out)
}

fn length_round_trip(seed: u64) -> Result<CriterionReport> {
    let corpus = i4_corpus(seed)?;
    let mut failures = Vec::new();
    for (k, sample) in corpus.iter().enumerate() {
        let l = length_from_metric(&sample.metric);
        let back = metric_from_length(&sample.semigroup, &l)?;
        let l2 = length_from_metric(&back);
        if back != sample.metric || l2 != l {
            failures.push(k);
        }
    }
    let sizes: Vec<usize> = corpus.iter().map(|s| s.semigroup.len()).collect();
    report(
        2,
        "length/metric round trip",
        failures.is_empty(),
        json!({
            "samples": corpus.len(),
            "weighted_samples": corpus.iter().filter(|s| s.weighted).count(),
            "generator_counts": corpus.iter().map(|s| s.generators).collect::<Vec<_>>(),
            "sizes": sizes,
            "failures": failures,
        }),
    )
}

fn lemma_suite(seed: u64) -> Result<CriterionReport> {
    let corpus = i4_corpus(seed)?;
    let mut bound = LemmaReport::default();
    let mut inverse = LemmaReport::default();
    let mut d_class = LemmaReport::default();
    for sample in &corpus {
        bound.merge(check_subinvariance_bound(&sample.semigroup, &sample.metric));
        inverse.merge(check_inverse_isometry(&sample.semigroup, &sample.metric));
        d_class.merge(check_d_class_isometry(&sample.semigroup, &sample.metric));
    }
    let passed = bound.passed() && inverse.passed() && d_class.passed();
    report(
        3,
        "right-invariance consequences",
        passed,
        json!({"subinvariance_bound": bound, "inverse_isometry": inverse, "d_class_isometry": d_class}),
    )
}

fn distortion(seed: u64) -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut passed = true;
    for k in 0..50 {
        let n = rng.gen_range(1..=40);
        let x = FiniteMetricSpace::random(&mut rng, n, 20);
        let colorer = if k % 2 == 0 { Colorer::Greedy } else { Colorer::MisraGries };
        let e = embed_space(&x, 0, colorer)?;
        let generators = e.family.involutions.len();
        let row = match verify_distortion(&x, &e) {
            Ok(r) => {
                let cross = if n <= 12 { Some(cross_check(&e)?.passed()) } else { None };
                passed &= cross != Some(false);
                json!({"points": n, "generators": generators, "pairs": r.pairs, "isometric_pairs": r.isometric_pairs, "cross_check": cross})
            }
            Err(err) => {
                passed = false;
                json!({"points": n, "error": err.to_string()})
            }
        };
        rows.push(row);
    }
    report(4, "embedding distortion", passed, json!({"spaces": rows}))
}

fn i3_unit() -> Result<(FiniteSemigroup, MetricTable)> {
    let o = SemigroupOracle::symmetric_inverse_monoid(3)?;
    let s = generate_closure(&o, &o.generators(0), 1000)?;
    let gens = WeightedGenerators::unit(&s, &o.generators(0))?;
    let d = complete_word_metric(&s, &gens)?;
    Ok((s, d))
}

fn band_reconstruction(seed: u64) -> Result<CriterionReport> {
    let (s, d) = i3_unit()?;
    let idx = s.elements().to_vec();
    let n = idx.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut nonzero_multipliers = 0;
    let mut radii = [0usize; 3];
    let mut terms = 0;
    let mut fallbacks = 0;
    for _ in 0..200 {
        let density = rng.gen_range(0.1..0.9);
        let mut m = Array2::<Complex64>::zeros((n, n));
        for y in 0..n {
            for x in 0..n {
                let close = d.distance(&idx[y], &idx[x]).and_then(Dist::finite).is_some_and(|v| v <= 2);
                if close && rng.gen_bool(density) {
                    m[[y, x]] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
        }
        let t = BandOperator::new(idx.clone(), Matrix::Float(m))?;
        let dec = decompose_band(&t, &d, &s, Choice::Least)?;
        radii[dec.radius as usize] += 1;
        worst = worst.max(dec.residual_operator);
        terms += dec.terms.len();
        fallbacks += dec.diagonal_fallbacks;
        for f in dec.multipliers(&idx)? {
            if propagation(&f, &d)? != 0 {
                nonzero_multipliers += 1;
            }
        }
    }
    report(
        5,
        "band decomposition",
        worst <= 1e-9 && nonzero_multipliers == 0,
        json!({
            "operators": 200,
            "by_propagation": radii,
            "terms": terms,
            "diagonal_fallbacks": fallbacks,
            "max_residual_operator_norm": format!("{worst:.3e}"),
            "multipliers_with_positive_propagation": nonzero_multipliers,
        }),
    )
}

fn product_tables(depth: u64) -> Result<(SemigroupOracle, MetricTable, MetricTable)> {
    let s = SemigroupOracle::product(GroupTable::cyclic(2)?, ChainKind::Nat);
    let gens = s.generators(depth);
    let g1 = WeightedGenerators::unit(&s, &gens)?;
    let g2 = WeightedGenerators::symmetric(&s, gens.iter().map(|g| (g.clone(), s.level(g))))?;
    let base = s.scope_basepoints(depth).unwrap_or_default();
    let d1 = weighted_word_metric(&s, &g1, &base, Some(depth * 2))?;
    let d2 = weighted_word_metric(&s, &g2, &base, Some(depth * 2))?;
    Ok((s, d1, d2))
}

fn product_example() -> Result<CriterionReport> {
    let (s, d1, d2) = product_tables(50)?;
    let mut ball_ok = true;
    let mut witnesses = Vec::new();
    for r in 1..=5u64 {
        let ball: Vec<Element> = d2
            .class_of(&Element::Pair { g: 0, e: r as i64 })
            .map(|c| c.members.clone())
            .unwrap_or_default();
        let check = validate_witness(&s, &d2, &ball, r);
        let greedy = properness_witness(&s, &d2, r);
        ball_ok &= check.witness().is_some() && greedy.witness().is_some();
        witnesses.push(json!({"radius": r, "ball": check, "greedy": greedy}));
    }
    let d1_search = properness_witness(&s, &d1, 1);
    let d1_missing = d1_search.witness().is_none();
    let mut profiles = Vec::new();
    for depth in [10u64, 20, 30, 40, 50] {
        let (_, a, b) = product_tables(depth)?;
        profiles.push((depth, coarse_profile(&a, &b)?));
    }
    let growth = profile_growth(&profiles, 1);
    report(
        6,
        "product metrics d1 and d2",
        ball_ok && d1_missing && growth.unbounded,
        json!({"d2_witnesses": witnesses, "d1_search": d1_search, "profile_growth": growth}),
    )
}

fn separating_example(seed: u64) -> Result<CriterionReport> {
    let scales = [1u64, 2, 3];
    let f = SemigroupOracle::fim1();
    let fg = WeightedGenerators::unit(&f, &f.generators(0))?;
    let fd = weighted_word_metric(&f, &fg, &f.scope_basepoints(8).unwrap_or_default(), None)?;
    let blocks = r_components(&fd, 1);
    let sizes_ok = blocks.blocks.iter().all(|b| match b.class {
        Element::Munn { a, b: hi, .. } => b.closed && b.size as i64 == hi - a + 1,
        _ => false,
    });
    let f_sparse = sparse_evidence(&fd, &scales);
    let f_asdim = asdim0_evidence(&fd, &scales);
    let path_ok = match f_asdim.witness() {
        Some(Witness::Path(w)) => w.hops >= 8 && w.spacing_ok && revalidate_witness(&f, &fg, w),
        _ => false,
    };
    let fim1_ok = sizes_ok && f_sparse.is_positive() && f_asdim.is_refuted() && path_ok;

    let b = SemigroupOracle::bicyclic();
    let bg = WeightedGenerators::unit(&b, &b.generators(0))?;
    let bd = weighted_word_metric(&b, &bg, &b.scope_basepoints(8).unwrap_or_default(), Some(8))?;
    let b_sparse = sparse_evidence(&bd, &scales);
    let b_asdim = asdim0_evidence(&bd, &scales);
    let bicyclic_ok = !b_sparse.is_positive() && !b_asdim.is_positive();

    let corpus = i4_corpus(seed)?;
    let finite_ok = corpus.iter().all(|sample| {
        asdim0_evidence(&sample.metric, &scales).is_established()
            && sparse_evidence(&sample.metric, &scales).is_established()
    });
    report(
        7,
        "separating example",
        fim1_ok && bicyclic_ok && finite_ok,
        json!({
            "fim1": {"block_sizes_match": sizes_ok, "sparse": f_sparse, "asdim0": f_asdim},
            "bicyclic": {"sparse": b_sparse, "asdim0": b_asdim},
            "i4_subsemigroups": {"samples": corpus.len(), "all_established": finite_ok},
        }),
    )
}

fn determinism(seed: u64) -> Result<CriterionReport> {
    let mut rows = Vec::new();
    let mut passed = true;
    for c in 2..=7 {
        let a = serde_json::to_string(&run(c, seed)?)?;
        let b = serde_json::to_string(&run(c, seed)?)?;
        passed &= a == b;
        rows.push(json!({"criterion": c, "identical": a == b, "bytes": a.len()}));
    }
    report(8, "determinism", passed, json!({"runs": rows}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_counts() {
        assert_eq!(all_partial_bijections(2).len(), 7);
        assert_eq!(all_partial_bijections(3).len(), 34);
        assert_eq!(all_partial_bijections(4).len(), 209);
    }

    #[test]
    fn closure_criterion_passes() {
        assert!(run(1, 0).unwrap().passed);
    }

    #[test]
    fn unknown_criterion_is_an_error() {
        assert!(run(9, 0).is_err());
    }
}
