use ndarray::Array2;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::{BandOperator, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::metric::{properness_witness, Dist, LemmaReport, MetricTable};
use crate::semigroup::{Element, FiniteSemigroup, InverseSemigroup};

/// Column map of `v_s` on an index list: `x ↦ sx` when `s*sx = x` and `sx`
/// is indexed.
pub(crate) fn wp_map<S: InverseSemigroup + ?Sized>(s: &S, indices: &[Element], g: &Element) -> Vec<Option<usize>> {
    let gi = s.inv(g);
    indices
        .iter()
        .map(|x| {
            let y = s.mul(g, x);
            if s.mul(&gi, &y) == *x {
                indices.iter().position(|z| *z == y)
            } else {
                None
            }
        })
        .collect()
}

/// Wagner–Preston matrix of `g` over an explicit index list.
pub fn wagner_preston_on<S: InverseSemigroup + ?Sized>(s: &S, indices: &[Element], g: &Element) -> Result<BandOperator> {
    s.check(g)?;
    let n = indices.len();
    let mut m = Array2::<Rational64>::zeros((n, n));
    for (x, y) in wp_map(s, indices, g).into_iter().enumerate() {
        if let Some(y) = y {
            m[[y, x]] = Rational64::one();
        }
    }
    BandOperator::new(indices.to_vec(), Matrix::Exact(m))
}

/// `v_g` on `ℓ²(S)` for a complete finite `S`, indexed by its elements.
pub fn wagner_preston(s: &FiniteSemigroup, g: &Element) -> Result<BandOperator> {
    if !s.is_complete() {
        return Err(Error::ScopeRequired);
    }
    wagner_preston_on(s, s.elements(), g)
}

/// `max d(x, y)` over nonzero entries.
pub fn propagation(t: &BandOperator, d: &MetricTable) -> Result<u64> {
    if let Some(x) = t.indices().iter().find(|x| !d.contains(x)) {
        return Err(Error::Alignment(format!("index {x} is not in the metric table")));
    }
    let idx = t.indices();
    let mut prop = 0;
    for (y, x) in t.support() {
        match d.distance(&idx[y], &idx[x]) {
            Some(Dist::Finite(v)) => prop = prop.max(v),
            _ => return Err(Error::InfinitePropagation),
        }
    }
    Ok(prop)
}

/// How `t_{x,y}` is picked among the witness elements moving `x` to `y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Choice {
    #[default]
    Least,
    Greatest,
}

/// One monomial `v_s f_s`, with `f_s` given on its support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub s: Element,
    pub coefficients: Vec<(Element, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionResult {
    pub radius: u64,
    pub witness: Vec<Element>,
    pub terms: Vec<Term>,
    /// Diagonal entries whose term is an idempotent outside the witness.
    pub diagonal_fallbacks: usize,
    pub residual_operator: f64,
    pub residual_frobenius: f64,
}

impl DecompositionResult {
    /// `Σ v_s diag(f_s)` over the given index list.
    pub fn reassemble<S: InverseSemigroup + ?Sized>(&self, s: &S, indices: &[Element], exact: bool) -> Result<BandOperator> {
        let n = indices.len();
        let mut fm = Array2::<Complex64>::zeros((n, n));
        let mut qm = Array2::<Rational64>::zeros((n, n));
        for term in &self.terms {
            let map = wp_map(s, indices, &term.s);
            for (x, value) in &term.coefficients {
                let col = indices
                    .iter()
                    .position(|z| z == x)
                    .ok_or_else(|| Error::Alignment(format!("coefficient at unindexed {x}")))?;
                let row = map[col].ok_or_else(|| Error::Alignment(format!("{x} is outside the domain of v_{}", term.s)))?;
                match value {
                    Scalar::Exact(q) if exact => qm[[row, col]] += *q,
                    v => fm[[row, col]] += v.to_complex(),
                }
            }
        }
        let matrix = if exact { Matrix::Exact(qm) } else { Matrix::Float(fm) };
        BandOperator::new(indices.to_vec(), matrix)
    }

    /// Each `f_s` as a diagonal operator.
    pub fn multipliers(&self, indices: &[Element]) -> Result<Vec<BandOperator>> {
        self.terms
            .iter()
            .map(|term| {
                let mut f = vec![Complex64::zero(); indices.len()];
                for (x, v) in &term.coefficients {
                    let i = indices
                        .iter()
                        .position(|z| z == x)
                        .ok_or_else(|| Error::Alignment(format!("coefficient at unindexed {x}")))?;
                    f[i] = v.to_complex();
                }
                BandOperator::diagonal(indices.to_vec(), &f)
            })
            .collect()
    }
}

/// Writes `T = Σ_{s ∈ F} v_s f_s` with `F` a properness witness at radius
/// `prop(T)` and `f_s(x) = T[sx, x]` when `s = t_{x,sx}`.
pub fn decompose_band<S: InverseSemigroup + ?Sized>(
    t: &BandOperator,
    d: &MetricTable,
    s: &S,
    choice: Choice,
) -> Result<DecompositionResult> {
    let r = propagation(t, d)?;
    let search = properness_witness(s, d, r);
    let mut witness = search.witness().ok_or(Error::DecompositionUnavailable { radius: r })?.to_vec();
    witness.sort();
    let idx = t.indices();
    let picks = |x: &Element, y: &Element| {
        let mut it = witness.iter().filter(|g| s.mul(g, x) == *y && s.mul(&s.inv(g), y) == *x);
        match choice {
            Choice::Least => it.next().cloned(),
            Choice::Greatest => it.next_back().cloned(),
        }
    };
    let mut terms: std::collections::BTreeMap<Element, Vec<(Element, Scalar)>> = Default::default();
    let mut fallbacks = 0;
    for (y, x) in t.support() {
        let (xe, ye) = (&idx[x], &idx[y]);
        let g = match picks(xe, ye) {
            Some(g) => g,
            None if x == y => {
                fallbacks += 1;
                s.range_idempotent(xe)
            }
            None => return Err(Error::DecompositionUnavailable { radius: r }),
        };
        terms.entry(g).or_default().push((xe.clone(), t.entry(y, x)));
    }
    let terms: Vec<Term> = terms
        .into_iter()
        .map(|(g, mut coefficients)| {
            coefficients.sort_by(|a, b| a.0.cmp(&b.0));
            Term { s: g, coefficients }
        })
        .collect();
    let mut out = DecompositionResult {
        radius: r,
        witness,
        terms,
        diagonal_fallbacks: fallbacks,
        residual_operator: 0.0,
        residual_frobenius: 0.0,
    };
    let back = out.reassemble(s, idx, t.matrix().is_exact())?;
    let residual = t.matrix().sub(back.matrix());
    out.residual_operator = residual.operator_norm();
    out.residual_frobenius = residual.frobenius_norm();
    Ok(out)
}

/// Checks `v_a v_b = v_{ab}` as partial maps on the elements of a complete
/// finite semigroup, for every `a` in `left` and `b` in `right`.
pub fn check_representation(s: &FiniteSemigroup, left: &[Element], right: &[Element]) -> Result<LemmaReport> {
    if !s.is_complete() {
        return Err(Error::ScopeRequired);
    }
    let idx = s.elements();
    let mut report = LemmaReport::default();
    for a in left {
        let va = wp_map(s, idx, a);
        for b in right {
            let vb = wp_map(s, idx, b);
            let vab = wp_map(s, idx, &s.mul(a, b));
            let composed: Vec<Option<usize>> = vb.iter().map(|y| y.and_then(|y| va[y])).collect();
            report.record(composed == vab, || vec![a.clone(), b.clone()]);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{complete_word_metric, WeightedGenerators};
    use crate::semigroup::{generate_closure, PartialBijection, SemigroupOracle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(n: u32) -> (FiniteSemigroup, MetricTable) {
        let o = SemigroupOracle::symmetric_inverse_monoid(n).unwrap();
        let s = generate_closure(&o, &o.generators(0), 1000).unwrap();
        let gens = WeightedGenerators::unit(&s, &o.generators(0)).unwrap();
        let d = complete_word_metric(&s, &gens).unwrap();
        (s, d)
    }

    #[test]
    fn gamma_on_i2_has_propagation_one() {
        let (s, d) = setup(2);
        let g = Element::map(PartialBijection::gamma(2, 2, 1).unwrap());
        let v = wagner_preston(&s, &g).unwrap();
        assert_eq!(propagation(&v, &d).unwrap(), 1);
        let id = BandOperator::identity(s.elements().to_vec()).unwrap();
        assert_eq!(propagation(&id, &d).unwrap(), 0);
    }

    #[test]
    fn idempotents_give_diagonal_projections() {
        let (s, d) = setup(3);
        for e in s.idempotents() {
            let v = wagner_preston(&s, &e).unwrap();
            assert!(v.support().iter().all(|&(i, j)| i == j));
            assert_eq!(propagation(&v, &d).unwrap(), 0);
        }
    }

    #[test]
    fn representation_law_and_bounds_on_i3() {
        let (s, d) = setup(3);
        let all = s.elements().to_vec();
        assert!(check_representation(&s, &all, &all).unwrap().passed());
        for g in &all {
            let v = wagner_preston(&s, g).unwrap();
            let vi = wagner_preston(&s, &s.inv(g)).unwrap();
            assert_eq!(v.compose(&vi).unwrap().compose(&v).unwrap(), v);
            assert_eq!(v.adjoint(), vi);
            let lg = d.distance(&s.source_idempotent(g), g).unwrap().finite().unwrap();
            assert!(propagation(&v, &d).unwrap() <= lg);
        }
    }

    #[test]
    fn decomposes_wagner_preston_exactly() {
        let (s, d) = setup(3);
        for g in s.elements() {
            let v = wagner_preston(&s, g).unwrap();
            let dec = decompose_band(&v, &d, &s, Choice::Least).unwrap();
            assert_eq!(dec.residual_frobenius, 0.0);
            let back = dec.reassemble(&s, s.elements(), true).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn zero_operator_has_empty_decomposition() {
        let (s, d) = setup(2);
        let z = BandOperator::zero(s.elements().to_vec()).unwrap();
        let dec = decompose_band(&z, &d, &s, Choice::Least).unwrap();
        assert!(dec.terms.is_empty());
        assert_eq!(dec.residual_operator, 0.0);
    }

    #[test]
    fn random_band_operators_reconstruct() {
        let (s, d) = setup(3);
        let idx = s.elements().to_vec();
        let n = idx.len();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for choice in [Choice::Least, Choice::Greatest] {
            for _ in 0..10 {
                let mut m = Array2::<Complex64>::zeros((n, n));
                for y in 0..n {
                    for x in 0..n {
                        let close = d.distance(&idx[y], &idx[x]).and_then(Dist::finite).is_some_and(|v| v <= 2);
                        if close && rng.gen_bool(0.5) {
                            m[[y, x]] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        }
                    }
                }
                let t = BandOperator::new(idx.clone(), Matrix::Float(m)).unwrap();
                let dec = decompose_band(&t, &d, &s, choice).unwrap();
                assert!(dec.residual_operator <= 1e-9);
                for f in dec.multipliers(&idx).unwrap() {
                    assert_eq!(propagation(&f, &d).unwrap(), 0);
                }
                let t2 = t.compose(&t).unwrap();
                let p = propagation(&t, &d).unwrap();
                assert!(propagation(&t2, &d).unwrap() <= 2 * p);
                assert_eq!(propagation(&t.adjoint(), &d).unwrap(), p);
            }
        }
    }

    #[test]
    fn cross_class_entry_is_infinite() {
        let (s, d) = setup(2);
        let idx = s.elements().to_vec();
        let n = idx.len();
        let a = idx.iter().position(|e| d.class_of(e).unwrap().members.len() == 1).unwrap();
        let b = (0..n).find(|&b| d.distance(&idx[a], &idx[b]) == Some(Dist::Inf)).unwrap();
        let mut m = Array2::<Rational64>::zeros((n, n));
        m[[a, b]] = Rational64::one();
        let t = BandOperator::new(idx, Matrix::Exact(m)).unwrap();
        assert!(matches!(propagation(&t, &d), Err(Error::InfinitePropagation)));
    }
}
