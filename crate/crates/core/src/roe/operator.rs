use std::collections::HashSet;

use ndarray::Array2;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::semigroup::{Element, SemigroupOracle};

pub const DEFAULT_INDEX_CAP: usize = 500;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A single matrix entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational64),
    Float(Complex64),
}

impl Scalar {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Scalar::Exact(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Float(z) => z,
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => q.to_string().serialize(serializer),
            Scalar::Float(z) => [z.re, z.im].serialize(serializer),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Exact(Array2<Rational64>),
    Float(Array2<Complex64>),
}

impl Matrix {
    pub fn dim(&self) -> usize {
        match self {
            Matrix::Exact(m) => m.nrows(),
            Matrix::Float(m) => m.nrows(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Matrix::Exact(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self {
            Matrix::Exact(m) => Scalar::Exact(m[[i, j]]),
            Matrix::Float(m) => Scalar::Float(m[[i, j]]),
        }
    }

    pub fn is_nonzero(&self, i: usize, j: usize, tol: f64) -> bool {
        match self {
            Matrix::Exact(m) => !m[[i, j]].is_zero(),
            Matrix::Float(m) => m[[i, j]].norm() > tol,
        }
    }

    pub fn to_complex(&self) -> Array2<Complex64> {
        match self {
            Matrix::Exact(m) => m.mapv(|q| Scalar::Exact(q).to_complex()),
            Matrix::Float(m) => m.clone(),
        }
    }

    pub fn dot(&self, other: &Matrix) -> Matrix {
        match (self, other) {
            (Matrix::Exact(a), Matrix::Exact(b)) => Matrix::Exact(a.dot(b)),
            _ => Matrix::Float(self.to_complex().dot(&other.to_complex())),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        match (self, other) {
            (Matrix::Exact(a), Matrix::Exact(b)) => Matrix::Exact(a - b),
            _ => Matrix::Float(self.to_complex() - other.to_complex()),
        }
    }

    pub fn adjoint(&self) -> Matrix {
        match self {
            Matrix::Exact(m) => Matrix::Exact(m.t().to_owned()),
            Matrix::Float(m) => Matrix::Float(m.t().mapv(|z| z.conj())),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.to_complex().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value by power iteration on `A*A` from a fixed
    /// random start, 200 iterations.
    pub fn operator_norm(&self) -> f64 {
        let a = self.to_complex();
        let n = a.ncols();
        if n == 0 || a.iter().all(|z| z.is_zero()) {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut v: ndarray::Array1<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let ah = a.t().mapv(|z| z.conj());
        let mut sigma = 0.0;
        for _ in 0..200 {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v.mapv_inplace(|z| z / norm);
            let av = a.dot(&v);
            sigma = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v = ah.dot(&av);
        }
        sigma
    }
}

/// A square matrix indexed by semigroup elements, `T[y, x] = <T δ_x, δ_y>`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandOperator {
    indices: Vec<Element>,
    matrix: Matrix,
    tolerance: f64,
}

impl BandOperator {
    pub fn new(indices: Vec<Element>, matrix: Matrix) -> Result<Self> {
        Self::with_cap(indices, matrix, DEFAULT_INDEX_CAP)
    }

    pub fn with_cap(indices: Vec<Element>, matrix: Matrix, cap: usize) -> Result<Self> {
        if indices.len() > cap {
            return Err(Error::Alignment(format!("{} indices exceed the cap of {cap}", indices.len())));
        }
        let shape = match &matrix {
            Matrix::Exact(m) => m.dim(),
            Matrix::Float(m) => m.dim(),
        };
        if shape != (indices.len(), indices.len()) {
            return Err(Error::Alignment(format!(
                "matrix is {}x{} but there are {} indices",
                shape.0,
                shape.1,
                indices.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = indices.iter().find(|e| !seen.insert(*e)) {
            return Err(Error::Alignment(format!("index {dup} repeated")));
        }
        Ok(Self { indices, matrix, tolerance: DEFAULT_TOLERANCE })
    }

    pub fn identity(indices: Vec<Element>) -> Result<Self> {
        let n = indices.len();
        Self::new(indices, Matrix::Exact(Array2::from_diag_elem(n, Rational64::from_integer(1))))
    }

    pub fn zero(indices: Vec<Element>) -> Result<Self> {
        let n = indices.len();
        Self::new(indices, Matrix::Exact(Array2::zeros((n, n))))
    }

    pub fn diagonal(indices: Vec<Element>, f: &[Complex64]) -> Result<Self> {
        let n = indices.len();
        if f.len() != n {
            return Err(Error::Alignment(format!("{} diagonal values for {n} indices", f.len())));
        }
        Self::new(indices, Matrix::Float(Array2::from_diag(&ndarray::Array1::from(f.to_vec()))))
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn indices(&self) -> &[Element] {
        &self.indices
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.indices.iter().position(|x| x == e)
    }

    pub fn entry(&self, y: usize, x: usize) -> Scalar {
        self.matrix.get(y, x)
    }

    pub fn is_nonzero(&self, y: usize, x: usize) -> bool {
        self.matrix.is_nonzero(y, x, self.tolerance)
    }

    /// Positions `(row, col)` of entries above the tolerance.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.is_nonzero(i, j)).collect()
    }

    fn same_indices(&self, other: &BandOperator) -> Result<()> {
        if self.indices != other.indices {
            return Err(Error::Alignment("operators have different index sets".into()));
        }
        Ok(())
    }

    pub fn compose(&self, other: &BandOperator) -> Result<BandOperator> {
        self.same_indices(other)?;
        Ok(Self { indices: self.indices.clone(), matrix: self.matrix.dot(&other.matrix), tolerance: self.tolerance })
    }

    pub fn minus(&self, other: &BandOperator) -> Result<BandOperator> {
        self.same_indices(other)?;
        Ok(Self { indices: self.indices.clone(), matrix: self.matrix.sub(&other.matrix), tolerance: self.tolerance })
    }

    pub fn adjoint(&self) -> BandOperator {
        Self { indices: self.indices.clone(), matrix: self.matrix.adjoint(), tolerance: self.tolerance }
    }

    /// Entrywise equality within tolerance (exact equality for two exact matrices).
    pub fn approx_eq(&self, other: &BandOperator) -> bool {
        self.indices == other.indices && self.minus(other).is_ok_and(|d| d.support().is_empty())
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .support()
            .into_iter()
            .map(|(i, j)| {
                let z = self.entry(i, j).to_complex();
                json!([i, j, z.re, z.im])
            })
            .collect();
        json!({
            "indices": self.indices.iter().map(Element::to_json).collect::<Vec<_>>(),
            "entries": entries,
            "exact": self.matrix.is_exact(),
        })
    }

    /// Reads `{indices, entries: [[row, col, re, im]]}`; an `"exact": true`
    /// document must have real entries, which are read as rationals.
    pub fn from_json(oracle: &SemigroupOracle, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            indices: Vec<Value>,
            entries: Vec<(usize, usize, f64, f64)>,
            #[serde(default)]
            exact: bool,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let indices = doc.indices.iter().map(|v| oracle.parse_key(v)).collect::<Result<Vec<_>>>()?;
        let n = indices.len();
        if let Some(&(i, j, _, _)) = doc.entries.iter().find(|e| e.0 >= n || e.1 >= n) {
            return Err(Error::Alignment(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
        }
        let matrix = if doc.exact {
            let mut m = Array2::<Rational64>::zeros((n, n));
            for &(i, j, re, im) in &doc.entries {
                if im != 0.0 {
                    return Err(Error::Format("exact operators need real entries".into()));
                }
                m[[i, j]] = Rational64::approximate_float(re)
                    .ok_or_else(|| Error::Format(format!("{re} is not representable as a rational")))?;
            }
            Matrix::Exact(m)
        } else {
            let mut m = Array2::<Complex64>::zeros((n, n));
            for &(i, j, re, im) in &doc.entries {
                m[[i, j]] = Complex64::new(re, im);
            }
            Matrix::Float(m)
        };
        Self::new(indices, matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(n: u64) -> Vec<Element> {
        (0..n).map(|a| Element::Bicyclic { a, b: 0 }).collect()
    }

    #[test]
    fn norms() {
        let mut m = Array2::<Complex64>::zeros((3, 3));
        m[[0, 0]] = Complex64::new(3.0, 0.0);
        m[[1, 2]] = Complex64::new(0.0, 4.0);
        let t = Matrix::Float(m);
        assert!((t.operator_norm() - 4.0).abs() < 1e-9);
        assert!((t.frobenius_norm() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn shape_and_duplicates_rejected() {
        assert!(BandOperator::new(idx(2), Matrix::Exact(Array2::zeros((3, 3)))).is_err());
        let dup = vec![Element::Chain(1), Element::Chain(1)];
        assert!(BandOperator::new(dup, Matrix::Exact(Array2::zeros((2, 2)))).is_err());
        assert!(BandOperator::with_cap(idx(4), Matrix::Exact(Array2::zeros((4, 4))), 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let o = SemigroupOracle::bicyclic();
        let f = [Complex64::new(1.5, -2.0), Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)];
        let t = BandOperator::diagonal(idx(3), &f).unwrap();
        let back = BandOperator::from_json(&o, &t.to_json().to_string()).unwrap();
        assert!(back.approx_eq(&t));
        let id = BandOperator::identity(idx(3)).unwrap();
        let back = BandOperator::from_json(&o, &id.to_json().to_string()).unwrap();
        assert_eq!(back, id);
    }
}
