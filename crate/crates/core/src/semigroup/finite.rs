use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::element::Element;
use super::family::SemigroupOracle;
use super::InverseSemigroup;
use crate::error::{Error, Result};

/// Closures above this many elements keep no product table; products are
/// recomputed through the source oracle instead.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "cap", rename_all = "snake_case")]
pub enum GenerationStatus {
    Complete,
    Truncated(usize),
}

#[derive(Clone, Debug)]
struct Tables {
    product: Vec<Option<u32>>,
    inverse: Vec<Option<u32>>,
}

/// A finite (possibly truncated) inverse semigroup with numbered elements.
#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    tables: Option<Tables>,
    idempotent: Vec<bool>,
    word_length: Vec<u32>,
    layer_sizes: Vec<usize>,
    status: GenerationStatus,
    source: Option<SemigroupOracle>,
    adjoined: bool,
}

impl FiniteSemigroup {
    /// Builds a complete table from raw parts; used by the document importer.
    pub(crate) fn from_tables(elements: Vec<Element>, product: Vec<Vec<usize>>, inverse: Vec<usize>) -> Self {
        let n = elements.len();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let flat = product.iter().flatten().map(|&v| Some(v as u32)).collect();
        let idempotent = (0..n).map(|i| product[i][i] == i).collect();
        Self {
            elements,
            index,
            tables: Some(Tables { product: flat, inverse: inverse.iter().map(|&v| Some(v as u32)).collect() }),
            idempotent,
            word_length: vec![0; n],
            layer_sizes: Vec::new(),
            status: GenerationStatus::Complete,
            source: None,
            adjoined: false,
        }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn status(&self) -> GenerationStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == GenerationStatus::Complete
    }

    pub fn source(&self) -> Option<&SemigroupOracle> {
        self.source.as_ref()
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    /// Word length (BFS layer) at which the element was first produced;
    /// 0 for imported tables and the adjoined identity.
    pub fn word_length(&self, i: usize) -> u32 {
        self.word_length[i]
    }

    /// Number of elements first produced at each word length `1, 2, ..`,
    /// counting only fully generated layers.
    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn has_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        match &self.tables {
            Some(t) => t.product[i * self.len() + j].map(|v| v as usize),
            None => self.index_of(&self.mul(&self.elements[i], &self.elements[j])),
        }
    }

    pub fn inverse_index(&self, i: usize) -> Option<usize> {
        match &self.tables {
            Some(t) => t.inverse[i].map(|v| v as usize),
            None => self.index_of(&self.inv(&self.elements[i])),
        }
    }

    pub fn is_idempotent_index(&self, i: usize) -> bool {
        self.idempotent[i]
    }

    pub fn idempotents(&self) -> Vec<Element> {
        (0..self.len()).filter(|&i| self.idempotent[i]).map(|i| self.elements[i].clone()).collect()
    }

    /// Two-sided identity inside the table, if any.
    pub fn identity(&self) -> Option<Element> {
        let n = self.len();
        (0..n)
            .filter(|&e| self.idempotent[e])
            .find(|&e| (0..n).all(|a| self.product_index(e, a) == Some(a) && self.product_index(a, e) == Some(a)))
            .map(|e| self.elements[e].clone())
    }

    fn fallback_mul(&self, a: &Element, b: &Element) -> Element {
        match &self.source {
            Some(src) => src.mul(a, b),
            None => panic!("product {a}·{b} is outside the table and no source oracle is attached"),
        }
    }
}

impl InverseSemigroup for FiniteSemigroup {
    fn name(&self) -> String {
        match &self.source {
            Some(src) => format!("closure({}) in {}", self.len(), src.name()),
            None => format!("table({})", self.len()),
        }
    }

    fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        if self.adjoined {
            if *a == Element::One {
                return b.clone();
            }
            if *b == Element::One {
                return a.clone();
            }
        }
        if let (Some(t), Some(i), Some(j)) = (&self.tables, self.index_of(a), self.index_of(b)) {
            if let Some(k) = t.product[i * self.len() + j] {
                return self.elements[k as usize].clone();
            }
        }
        self.fallback_mul(a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        if *a == Element::One {
            return Element::One;
        }
        if let (Some(t), Some(i)) = (&self.tables, self.index_of(a)) {
            if let Some(k) = t.inverse[i] {
                return self.elements[k as usize].clone();
            }
        }
        match &self.source {
            Some(src) => src.inv(a),
            None => panic!("inverse of {a} is outside the table"),
        }
    }

    fn level(&self, e: &Element) -> u64 {
        match &self.source {
            Some(src) if !self.is_complete() => src.level(e),
            _ => 0,
        }
    }

    fn is_finite(&self) -> bool {
        self.is_complete()
    }

    fn is_idempotent(&self, e: &Element) -> bool {
        match self.index_of(e) {
            Some(i) => self.idempotent[i],
            None => self.mul(e, e) == *e,
        }
    }

    fn d_related_unscoped(&self, a: &Element, b: &Element) -> Result<bool> {
        super::green::d_related_in(self, self, a, b)
    }
}

/// Breadth-first closure of `generators` under multiplication and inversion.
///
/// Layer `k` holds the elements whose shortest word over the symmetric
/// generating set has length `k`; inside a layer, elements are numbered in
/// canonical key order. Stops with `Truncated(cap)` once more than `cap`
/// elements would be needed.
pub fn generate_closure(oracle: &SemigroupOracle, generators: &[Element], cap: usize) -> Result<FiniteSemigroup> {
    let cap = cap.max(1);
    for g in generators {
        oracle.check(g)?;
    }
    let symmetric: Vec<Element> = generators
        .iter()
        .flat_map(|g| [g.clone(), oracle.inv(g)])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut elements: Vec<Element> = Vec::new();
    let mut index: HashMap<Element, usize> = HashMap::new();
    let mut word_length = Vec::new();
    let mut layer_sizes = Vec::new();
    let mut status = GenerationStatus::Complete;

    let mut layer: BTreeSet<Element> = symmetric.iter().cloned().collect();
    let mut depth = 1u32;
    let mut frontier: Vec<Element> = Vec::new();
    while !layer.is_empty() {
        if elements.len() + layer.len() > cap {
            for e in layer.into_iter().take(cap - elements.len()) {
                index.insert(e.clone(), elements.len());
                elements.push(e);
                word_length.push(depth);
            }
            status = GenerationStatus::Truncated(cap);
            break;
        }
        layer_sizes.push(layer.len());
        frontier.clear();
        for e in layer {
            index.insert(e.clone(), elements.len());
            elements.push(e.clone());
            word_length.push(depth);
            frontier.push(e);
        }
        let mut next = BTreeSet::new();
        for x in &frontier {
            for g in &symmetric {
                let y = oracle.mul(x, g);
                if !index.contains_key(&y) {
                    next.insert(y);
                }
            }
        }
        layer = next;
        depth += 1;
    }

    let n = elements.len();
    let tables = (n <= TABLE_LIMIT).then(|| {
        let mut product = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                product.push(index.get(&oracle.mul(a, b)).map(|&k| k as u32));
            }
        }
        let inverse = elements.iter().map(|a| index.get(&oracle.inv(a)).map(|&k| k as u32)).collect();
        Tables { product, inverse }
    });
    let idempotent = elements.iter().map(|e| oracle.is_idempotent(e)).collect();
    Ok(FiniteSemigroup {
        elements,
        index,
        tables,
        idempotent,
        word_length,
        layer_sizes,
        status,
        source: Some(oracle.clone()),
        adjoined: false,
    })
}

/// `S¹ = S ⊔ {1}` with `1` acting as an identity. The new element is appended last.
pub fn adjoin_identity(s: &FiniteSemigroup) -> FiniteSemigroup {
    let n = s.len();
    let mut elements = s.elements.clone();
    elements.push(Element::One);
    let mut index = s.index.clone();
    index.insert(Element::One, n);
    let tables = s.tables.as_ref().map(|t| {
        let m = n + 1;
        let mut product = vec![None; m * m];
        for i in 0..n {
            for j in 0..n {
                product[i * m + j] = t.product[i * n + j];
            }
            product[i * m + n] = Some(i as u32);
            product[n * m + i] = Some(i as u32);
        }
        product[n * m + n] = Some(n as u32);
        let mut inverse = t.inverse.clone();
        inverse.push(Some(n as u32));
        Tables { product, inverse }
    });
    let mut idempotent = s.idempotent.clone();
    idempotent.push(true);
    let mut word_length = s.word_length.clone();
    word_length.push(0);
    FiniteSemigroup {
        elements,
        index,
        tables,
        idempotent,
        word_length,
        layer_sizes: s.layer_sizes.clone(),
        status: s.status,
        source: s.source.clone(),
        adjoined: true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SemigroupKind {
    Group,
    Semilattice,
    General,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub kind: SemigroupKind,
    pub idempotents: Vec<Element>,
    pub warning: Option<String>,
}

/// Group iff exactly one idempotent, semilattice iff every element is idempotent.
pub fn classify(s: &FiniteSemigroup) -> Classification {
    let idempotents = s.idempotents();
    let kind = if idempotents.len() == 1 {
        SemigroupKind::Group
    } else if idempotents.len() == s.len() {
        SemigroupKind::Semilattice
    } else {
        SemigroupKind::General
    };
    let warning = match s.status() {
        GenerationStatus::Complete => None,
        GenerationStatus::Truncated(cap) => Some(format!(
            "classification at scale: closure truncated at {cap} elements"
        )),
    };
    Classification { kind, idempotents, warning }
}

impl FiniteSemigroup {
    pub(crate) fn check_laws(&self) -> Result<()> {
        let n = self.len();
        let p = |i: usize, j: usize| self.product_index(i, j).expect("complete table");
        for a in 0..n {
            for b in 0..n {
                let ab = p(a, b);
                for c in 0..n {
                    if p(ab, c) != p(a, p(b, c)) {
                        return Err(Error::InvalidDescriptor(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        for a in 0..n {
            let s = self.inverse_index(a).expect("complete table");
            if p(p(a, s), a) != a || p(p(s, a), s) != s {
                return Err(Error::InvalidDescriptor(format!("inverse law fails at element {a}")));
            }
        }
        let idem: Vec<usize> = (0..n).filter(|&i| self.idempotent[i]).collect();
        for &e in &idem {
            for &f in &idem {
                if p(e, f) != p(f, e) {
                    return Err(Error::InvalidDescriptor(format!("idempotents {e} and {f} do not commute")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{ChainKind, GroupTable, PartialBijection};

    fn i_n(n: u32) -> SemigroupOracle {
        SemigroupOracle::symmetric_inverse_monoid(n).unwrap()
    }

    #[test]
    fn single_rank_one_map_in_i2() {
        let o = i_n(2);
        let g = o.pb(&[(1, 2)]).unwrap();
        let s = generate_closure(&o, &[g], 100).unwrap();
        assert!(s.is_complete());
        let mut got: Vec<String> = s.elements().iter().map(|e| e.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["[[1,1]]", "[[1,2]]", "[[2,1]]", "[[2,2]]", "[]"]);
    }

    #[test]
    fn full_symmetric_inverse_monoids() {
        for (n, size) in [(1u32, 2usize), (2, 7), (3, 34), (4, 209)] {
            let o = i_n(n);
            let s = generate_closure(&o, &o.generators(0), 10_000).unwrap();
            assert!(s.is_complete());
            assert_eq!(s.len(), size, "I{n}");
        }
    }

    #[test]
    fn bicyclic_closure_truncates() {
        let o = SemigroupOracle::bicyclic();
        let s = generate_closure(&o, &o.generators(0), 100).unwrap();
        assert_eq!(s.status(), GenerationStatus::Truncated(100));
        assert_eq!(s.len(), 100);
        // layer k of {p,q} words holds the k+1 normal forms q^a p^b with a+b = k,
        // except layer 2 also hits the identity pq = 1
        assert_eq!(&s.layer_sizes()[..4], &[2, 4, 4, 5]);
    }

    #[test]
    fn closure_order_is_reproducible() {
        let o = i_n(3);
        let gens = o.generators(0);
        let a = generate_closure(&o, &gens, 1000).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let b = generate_closure(&o, &rev, 1000).unwrap();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn exact_cap_is_complete() {
        let o = i_n(2);
        let s = generate_closure(&o, &o.generators(0), 7).unwrap();
        assert!(s.is_complete());
        let t = generate_closure(&o, &o.generators(0), 6).unwrap();
        assert_eq!(t.status(), GenerationStatus::Truncated(6));
    }

    #[test]
    fn adjoined_identity_is_its_own_class() {
        let o = i_n(2);
        let g = o.pb(&[(1, 2)]).unwrap();
        let s = generate_closure(&o, &[g], 100).unwrap();
        let s1 = adjoin_identity(&s);
        assert_eq!(s1.len(), s.len() + 1);
        for e in s.elements() {
            assert_eq!(s1.mul(&Element::One, e), *e);
            assert_eq!(s1.mul(e, &Element::One), *e);
            assert_ne!(s1.mul(e, &s1.inv(e)), Element::One);
        }
        assert_eq!(s1.identity(), Some(Element::One));
    }

    #[test]
    fn classification() {
        let z2 = SemigroupOracle::product(GroupTable::cyclic(2).unwrap(), ChainKind::Finite(1));
        let s = generate_closure(&z2, &z2.generators(1), 10).unwrap();
        assert_eq!(classify(&s).kind, SemigroupKind::Group);

        let chain = SemigroupOracle::chain(ChainKind::Finite(10));
        let gens: Vec<Element> = (0..10).map(Element::Chain).collect();
        let c = generate_closure(&chain, &gens, 100).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(classify(&c).kind, SemigroupKind::Semilattice);

        let o = i_n(2);
        let i2 = generate_closure(&o, &o.generators(0), 100).unwrap();
        let cls = classify(&i2);
        assert_eq!(cls.kind, SemigroupKind::General);
        assert_eq!(cls.idempotents.len(), 4);

        let b = SemigroupOracle::bicyclic();
        let t = generate_closure(&b, &b.generators(0), 50).unwrap();
        assert!(classify(&t).warning.is_some());
    }

    #[test]
    fn empty_map_is_an_ordinary_idempotent() {
        let o = i_n(3);
        let s = generate_closure(&o, &o.generators(0), 1000).unwrap();
        let zero = Element::Map(PartialBijection::empty(3));
        let i = s.index_of(&zero).unwrap();
        assert!(s.is_idempotent_index(i));
        assert!(s.check_laws().is_ok());
    }
}
