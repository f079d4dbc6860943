use std::collections::HashSet;

use ndarray::Array2;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::operator::{BandOperator, Matrix};
use crate::error::{Error, Result};
use crate::semigroup::Element;

/// The shift `δ_{x_k} ↦ δ_{x_{k+1}}` along `path`, killing the last point
/// and fixing every index off the path.
pub fn path_shift(indices: &[Element], path: &[Element]) -> Result<BandOperator> {
    let mut seen = HashSet::new();
    if let Some(dup) = path.iter().find(|e| !seen.insert(*e)) {
        return Err(Error::Alignment(format!("path visits {dup} twice")));
    }
    let pos = path
        .iter()
        .map(|x| indices.iter().position(|z| z == x).ok_or_else(|| Error::Alignment(format!("{x} is not indexed"))))
        .collect::<Result<Vec<usize>>>()?;
    let n = indices.len();
    let mut m = Array2::<Rational64>::zeros((n, n));
    for i in 0..n {
        if !pos.contains(&i) {
            m[[i, i]] = Rational64::one();
        }
    }
    for w in pos.windows(2) {
        m[[w[1], w[0]]] = Rational64::one();
    }
    BandOperator::new(indices.to_vec(), Matrix::Exact(m))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryReport {
    /// `v*v = 1`.
    pub isometry: bool,
    /// `vv* = 1`.
    pub co_isometry: bool,
    /// `v*v = 1` and `vv* < 1`; never true for a finite matrix.
    pub proper: bool,
    /// Indices where `v*v` falls short of 1 on the diagonal.
    pub isometry_defect: Vec<Element>,
    /// Indices where `vv*` falls short of 1 on the diagonal.
    pub co_isometry_defect: Vec<Element>,
    pub reason: String,
}

pub fn is_proper_isometry(v: &BandOperator) -> IsometryReport {
    let tol = v.tolerance();
    let vv = v.matrix().adjoint().dot(v.matrix());
    let ww = v.matrix().dot(&v.matrix().adjoint());
    let check = |m: &Matrix| -> (bool, Vec<Element>) {
        let c = m.to_complex();
        let n = c.nrows();
        let mut defect = Vec::new();
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
                let off = match m {
                    Matrix::Exact(q) => q[[i, j]] != if i == j { Rational64::one() } else { Rational64::zero() },
                    Matrix::Float(_) => (c[[i, j]] - target).norm() > tol,
                };
                if off {
                    ok = false;
                    if i == j {
                        defect.push(v.indices()[i].clone());
                    }
                }
            }
        }
        (ok, defect)
    };
    let (isometry, isometry_defect) = check(&vv);
    let (co_isometry, co_isometry_defect) = check(&ww);
    let proper = isometry && !co_isometry;
    let reason = if !isometry {
        "v*v != 1".to_string()
    } else if co_isometry {
        "v*v = 1 and vv* = 1: unitary, not proper".to_string()
    } else {
        "v*v = 1 but vv* < 1".to_string()
    };
    let reason = if isometry && v.dim() > 0 {
        format!("{reason}; in dimension {} an isometry has full rank, so vv* = 1", v.dim())
    } else {
        reason
    };
    IsometryReport { isometry, co_isometry, proper, isometry_defect, co_isometry_defect, reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{complete_word_metric, WeightedGenerators};
    use crate::roe::propagation;
    use crate::semigroup::{generate_closure, SemigroupOracle};

    #[test]
    fn truncated_shift_defects() {
        let (s, d) = {
            let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
            let s = generate_closure(&o, &o.generators(0), 100).unwrap();
            let g = WeightedGenerators::unit(&s, &o.generators(0)).unwrap();
            let d = complete_word_metric(&s, &g).unwrap();
            (s, d)
        };
        let class = d.classes().iter().max_by_key(|c| c.len()).unwrap();
        let path: Vec<Element> = class.members.iter().take(4).cloned().collect();
        let v = path_shift(s.elements(), &path).unwrap();
        let rep = is_proper_isometry(&v);
        assert!(!rep.proper && !rep.isometry);
        assert_eq!(rep.isometry_defect, vec![path[3].clone()]);
        assert_eq!(rep.co_isometry_defect, vec![path[0].clone()]);
        let hop = path.windows(2).map(|w| d.distance(&w[0], &w[1]).unwrap().finite().unwrap()).max().unwrap();
        assert!(propagation(&v, &d).unwrap() <= hop);
    }

    #[test]
    fn unitaries_and_projections_are_not_proper() {
        let idx: Vec<Element> = (1..=3).map(Element::Chain).collect();
        let id = BandOperator::identity(idx.clone()).unwrap();
        let rep = is_proper_isometry(&id);
        assert!(rep.isometry && rep.co_isometry && !rep.proper);
        let mut m = Array2::<Rational64>::zeros((3, 3));
        m[[0, 1]] = Rational64::one();
        m[[1, 2]] = Rational64::one();
        m[[2, 0]] = Rational64::one();
        let perm = BandOperator::new(idx.clone(), Matrix::Exact(m)).unwrap();
        assert!(!is_proper_isometry(&perm).proper);
        let mut p = Array2::<Rational64>::zeros((3, 3));
        p[[0, 0]] = Rational64::one();
        let proj = BandOperator::new(idx, Matrix::Exact(p)).unwrap();
        let rep = is_proper_isometry(&proj);
        assert!(!rep.isometry && !rep.proper);
    }
}
