use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::element::{Element, PartialBijection};
use super::finite::{generate_closure, FiniteSemigroup};
use super::green;
use super::io::ConcreteDocument;
use super::InverseSemigroup;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table (indices `0..order`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>, generators: Option<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidDescriptor("group table is empty".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidDescriptor("group table must be square with entries < order".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidDescriptor(format!(
                            "group table not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidDescriptor("group table has no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidDescriptor(format!("group element {a} has no inverse")))?;
            inverse.push(inv);
        }
        let generators = match generators {
            Some(g) => {
                if g.iter().any(|&x| x >= n) {
                    return Err(Error::InvalidDescriptor("group generator out of range".into()));
                }
                let mut g = g;
                // symmetric closure
                let extra: Vec<usize> = g.iter().map(|&x| inverse[x]).collect();
                g.extend(extra);
                g.retain(|&x| x != identity);
                g.sort_unstable();
                g.dedup();
                g
            }
            None => (0..n).filter(|&x| x != identity).collect(),
        };
        Ok(Self { table, identity, inverse, generators })
    }

    /// `Z_k` with generator 1.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDescriptor("cyclic group order must be positive".into()));
        }
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        Self::new(table, Some(if k > 1 { vec![1] } else { vec![] }))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Symmetric generating set, identity removed.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Which chain `(C, min)` a chain or product family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainKind {
    /// `{1, 2, 3, ..}`
    #[serde(rename = "nat")]
    Nat,
    /// `{.., -2, -1}`
    #[serde(rename = "negint")]
    NegInt,
    /// `{0, .., len - 1}`
    #[serde(rename = "finite")]
    Finite(u32),
}

impl ChainKind {
    pub fn contains(&self, v: i64) -> bool {
        match *self {
            ChainKind::Nat => v >= 1,
            ChainKind::NegInt => v <= -1,
            ChainKind::Finite(len) => v >= 0 && v < len as i64,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ChainKind::Finite(_))
    }

    /// Chain values whose absolute value is at most `depth`, ascending.
    pub fn values_up_to(&self, depth: u64) -> Vec<i64> {
        let d = depth as i64;
        match *self {
            ChainKind::Nat => (1..=d).collect(),
            ChainKind::NegInt => (-d..=-1).collect(),
            ChainKind::Finite(len) => (0..(len as i64).min(d + 1)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDescriptor {
    Cyclic { cyclic: usize },
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        generators: Option<Vec<usize>>,
    },
}

/// JSON-facing description of a semigroup family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyDescriptor {
    SymmetricInverseMonoid { n: u32 },
    Bicyclic,
    Fim1,
    Product { group: GroupDescriptor, chain: ChainKind },
    Chain { chain: ChainKind },
    Concrete(ConcreteDocument),
    Generated { n: u32, generators: Vec<Vec<(u32, u32)>> },
}

impl FamilyDescriptor {
    /// Accepts either a JSON descriptor or a shorthand such as `I3`,
    /// `bicyclic`, `fim1`, `chain-nat`, `Z2xN`, `Z3xZ-`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return Ok(serde_json::from_str(t)?);
        }
        let lower = t.to_ascii_lowercase();
        match lower.as_str() {
            "bicyclic" => return Ok(FamilyDescriptor::Bicyclic),
            "fim1" => return Ok(FamilyDescriptor::Fim1),
            "chain" | "chain-nat" => return Ok(FamilyDescriptor::Chain { chain: ChainKind::Nat }),
            "chain-negint" => return Ok(FamilyDescriptor::Chain { chain: ChainKind::NegInt }),
            _ => {}
        }
        if let Some(n) = lower.strip_prefix('i').and_then(|s| s.parse::<u32>().ok()) {
            return Ok(FamilyDescriptor::SymmetricInverseMonoid { n });
        }
        if let Some(k) = lower.strip_prefix("chain-finite").and_then(|s| s.parse::<u32>().ok()) {
            return Ok(FamilyDescriptor::Chain { chain: ChainKind::Finite(k) });
        }
        if let Some(rest) = lower.strip_prefix('z') {
            if let Some((k, chain)) = rest.split_once('x') {
                let cyclic: usize = k
                    .parse()
                    .map_err(|_| Error::InvalidDescriptor(format!("bad group order in {t:?}")))?;
                let chain = match chain {
                    "n" => ChainKind::Nat,
                    "z-" => ChainKind::NegInt,
                    _ => return Err(Error::InvalidDescriptor(format!("unknown chain in {t:?}"))),
                };
                return Ok(FamilyDescriptor::Product { group: GroupDescriptor::Cyclic { cyclic }, chain });
            }
        }
        Err(Error::InvalidDescriptor(format!("unrecognised family {t:?}")))
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    SymmetricInverseMonoid { n: u32 },
    Bicyclic,
    Fim1,
    Product { group: GroupTable, chain: ChainKind },
    Chain(ChainKind),
    Concrete(Arc<FiniteSemigroup>),
    Generated { n: u32, generators: Vec<PartialBijection> },
}

/// Exact arithmetic for one inverse semigroup, concretely or implicitly presented.
#[derive(Clone, Debug)]
pub struct SemigroupOracle {
    family: Family,
}

/// Builds an oracle from a descriptor, validating every constraint.
pub fn make_family(desc: &FamilyDescriptor) -> Result<SemigroupOracle> {
    let family = match desc {
        FamilyDescriptor::SymmetricInverseMonoid { n } => {
            if *n == 0 {
                return Err(Error::InvalidDescriptor("symmetric_inverse_monoid needs n >= 1".into()));
            }
            Family::SymmetricInverseMonoid { n: *n }
        }
        FamilyDescriptor::Bicyclic => Family::Bicyclic,
        FamilyDescriptor::Fim1 => Family::Fim1,
        FamilyDescriptor::Product { group, chain } => {
            check_chain(chain)?;
            let group = match group {
                GroupDescriptor::Cyclic { cyclic } => GroupTable::cyclic(*cyclic)?,
                GroupDescriptor::Table { table, generators } => GroupTable::new(table.clone(), generators.clone())?,
            };
            Family::Product { group, chain: *chain }
        }
        FamilyDescriptor::Chain { chain } => {
            check_chain(chain)?;
            Family::Chain(*chain)
        }
        FamilyDescriptor::Concrete(doc) => Family::Concrete(Arc::new(FiniteSemigroup::from_document(doc)?)),
        FamilyDescriptor::Generated { n, generators } => {
            if *n == 0 {
                return Err(Error::InvalidDescriptor("generated family needs n >= 1".into()));
            }
            let generators = generators
                .iter()
                .map(|pairs| PartialBijection::new(*n, pairs.iter().copied()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
            Family::Generated { n: *n, generators }
        }
    };
    Ok(SemigroupOracle { family })
}

fn check_chain(chain: &ChainKind) -> Result<()> {
    if let ChainKind::Finite(0) = chain {
        return Err(Error::InvalidDescriptor("finite chain needs length >= 1".into()));
    }
    Ok(())
}

impl SemigroupOracle {
    pub fn symmetric_inverse_monoid(n: u32) -> Result<Self> {
        make_family(&FamilyDescriptor::SymmetricInverseMonoid { n })
    }

    pub fn bicyclic() -> Self {
        Self { family: Family::Bicyclic }
    }

    pub fn fim1() -> Self {
        Self { family: Family::Fim1 }
    }

    pub fn product(group: GroupTable, chain: ChainKind) -> Self {
        Self { family: Family::Product { group, chain } }
    }

    pub fn chain(chain: ChainKind) -> Self {
        Self { family: Family::Chain(chain) }
    }

    pub fn concrete(table: FiniteSemigroup) -> Self {
        Self { family: Family::Concrete(Arc::new(table)) }
    }

    pub fn generated(n: u32, generators: Vec<PartialBijection>) -> Self {
        Self { family: Family::Generated { n, generators } }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The bicyclic generators `p = q^0 p^1` and `q = q^1 p^0`.
    pub fn bicyclic_p() -> Element {
        Element::Bicyclic { a: 0, b: 1 }
    }

    pub fn bicyclic_q() -> Element {
        Element::Bicyclic { a: 1, b: 0 }
    }

    /// The free generator `x = (0, 1, 1)` of the free inverse monoid of rank one.
    pub fn fim1_x() -> Element {
        Element::Munn { a: 0, g: 1, b: 1 }
    }

    pub fn pb(&self, pairs: &[(u32, u32)]) -> Result<Element> {
        match self.family {
            Family::SymmetricInverseMonoid { n } | Family::Generated { n, .. } => {
                Ok(Element::Map(PartialBijection::new(n, pairs.iter().copied())?))
            }
            _ => Err(Error::InvalidElement(format!("{} has no partial bijections", self.name()))),
        }
    }

    /// Identity element, when the family is a monoid.
    pub fn identity(&self) -> Option<Element> {
        match &self.family {
            Family::SymmetricInverseMonoid { n } => {
                Some(Element::Map(PartialBijection::identity_on(*n, 1..=*n).ok()?))
            }
            Family::Bicyclic => Some(Element::Bicyclic { a: 0, b: 0 }),
            Family::Fim1 => Some(Element::Munn { a: 0, g: 0, b: 0 }),
            Family::Product { group, chain } => match chain {
                ChainKind::NegInt => Some(Element::Pair { g: group.identity() as u32, e: -1 }),
                ChainKind::Finite(len) => Some(Element::Pair { g: group.identity() as u32, e: *len as i64 - 1 }),
                ChainKind::Nat => None,
            },
            Family::Chain(chain) => match chain {
                ChainKind::NegInt => Some(Element::Chain(-1)),
                ChainKind::Finite(len) => Some(Element::Chain(*len as i64 - 1)),
                ChainKind::Nat => None,
            },
            Family::Concrete(t) => t.identity(),
            Family::Generated { .. } => None,
        }
    }

    /// A generating set. For infinite families with infinitely many
    /// generators, only those at level `<= depth` are listed.
    pub fn generators(&self, depth: u64) -> Vec<Element> {
        let mut gens = match &self.family {
            Family::SymmetricInverseMonoid { n } => {
                let n = *n;
                let mut g = Vec::new();
                let cycle: Vec<u32> = (1..=n).map(|i| i % n + 1).collect();
                g.push(Element::Map(PartialBijection::permutation(&cycle).unwrap()));
                if n >= 2 {
                    let mut t: Vec<u32> = (1..=n).collect();
                    t.swap(0, 1);
                    g.push(Element::Map(PartialBijection::permutation(&t).unwrap()));
                }
                g.push(Element::Map(PartialBijection::identity_on(n, 1..n).unwrap()));
                g
            }
            Family::Bicyclic => vec![Self::bicyclic_p(), Self::bicyclic_q()],
            Family::Fim1 => vec![Self::fim1_x()],
            Family::Product { group, chain } => chain
                .values_up_to(depth)
                .into_iter()
                .flat_map(|e| group.generators().iter().map(move |&g| Element::Pair { g: g as u32, e }))
                .collect(),
            Family::Chain(_) => Vec::new(),
            Family::Concrete(t) => t.elements().to_vec(),
            Family::Generated { generators, .. } => generators.iter().cloned().map(Element::Map).collect(),
        };
        gens.sort();
        gens.dedup();
        gens
    }

    /// Basepoints spanning the scope of depth `depth` for infinite families,
    /// one per L-class. `None` for finite families (use a closure instead).
    pub fn scope_basepoints(&self, depth: u64) -> Option<Vec<Element>> {
        let d = depth as i64;
        match &self.family {
            Family::Bicyclic => Some((0..=depth).map(|b| Element::Bicyclic { a: 0, b }).collect()),
            Family::Fim1 => Some(
                (0..=d)
                    .flat_map(|c| (0..=d - c).map(move |dd| Element::Munn { a: -c, g: 0, b: dd }))
                    .collect(),
            ),
            Family::Product { group, chain } if !chain.is_finite() => Some(
                chain
                    .values_up_to(depth)
                    .into_iter()
                    .map(|e| Element::Pair { g: group.identity() as u32, e })
                    .collect(),
            ),
            Family::Chain(chain) if !chain.is_finite() => {
                Some(chain.values_up_to(depth).into_iter().map(Element::Chain).collect())
            }
            _ => None,
        }
    }

    /// Parses a JSON key for this family.
    pub fn parse_key(&self, v: &Value) -> Result<Element> {
        let bad = || Error::InvalidElement(format!("{v} is not a key of {}", self.name()));
        let ints = |v: &Value| -> Option<Vec<i64>> { v.as_array()?.iter().map(|x| x.as_i64()).collect() };
        let e = match &self.family {
            Family::SymmetricInverseMonoid { n } | Family::Generated { n, .. } => {
                let pairs: Vec<(u32, u32)> = v
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|p| {
                        let p = ints(p)?;
                        (p.len() == 2 && p[0] > 0 && p[1] > 0).then(|| (p[0] as u32, p[1] as u32))
                    })
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                Element::Map(PartialBijection::new(*n, pairs)?)
            }
            Family::Bicyclic => match ints(v).as_deref() {
                Some([a, b]) if *a >= 0 && *b >= 0 => Element::Bicyclic { a: *a as u64, b: *b as u64 },
                _ => return Err(bad()),
            },
            Family::Fim1 => match ints(v).as_deref() {
                Some([a, g, b]) => Element::Munn { a: *a, g: *g, b: *b },
                _ => return Err(bad()),
            },
            Family::Product { .. } => match ints(v).as_deref() {
                Some([g, e]) if *g >= 0 => Element::Pair { g: *g as u32, e: *e },
                _ => return Err(bad()),
            },
            Family::Chain(_) => Element::Chain(v.as_i64().ok_or_else(bad)?),
            Family::Concrete(_) => Element::Label(v.to_string()),
        };
        self.check(&e)?;
        Ok(e)
    }
}

impl fmt::Display for SemigroupOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::SymmetricInverseMonoid { n } => write!(f, "I{n}"),
            Family::Bicyclic => f.write_str("bicyclic"),
            Family::Fim1 => f.write_str("fim1"),
            Family::Product { group, chain } => {
                let c = match chain {
                    ChainKind::Nat => "N".to_string(),
                    ChainKind::NegInt => "Z-".to_string(),
                    ChainKind::Finite(k) => format!("C{k}"),
                };
                write!(f, "G{}x{c}", group.order())
            }
            Family::Chain(chain) => write!(f, "chain({chain:?})"),
            Family::Concrete(t) => write!(f, "concrete({})", t.len()),
            Family::Generated { n, generators } => write!(f, "generated(I{n}; {} gens)", generators.len()),
        }
    }
}

fn munn_valid(a: i64, g: i64, b: i64) -> bool {
    a <= 0.min(g) && b >= 0.max(g)
}

impl InverseSemigroup for SemigroupOracle {
    fn name(&self) -> String {
        self.to_string()
    }

    fn contains(&self, e: &Element) -> bool {
        match (&self.family, e) {
            (Family::SymmetricInverseMonoid { n }, Element::Map(pb))
            | (Family::Generated { n, .. }, Element::Map(pb)) => pb.ground() == *n,
            (Family::Bicyclic, Element::Bicyclic { .. }) => true,
            (Family::Fim1, Element::Munn { a, g, b }) => munn_valid(*a, *g, *b),
            (Family::Product { group, chain }, Element::Pair { g, e }) => {
                (*g as usize) < group.order() && chain.contains(*e)
            }
            (Family::Chain(chain), Element::Chain(v)) => chain.contains(*v),
            (Family::Concrete(t), e) => t.index_of(e).is_some(),
            _ => false,
        }
    }

    fn mul(&self, x: &Element, y: &Element) -> Element {
        match (&self.family, x, y) {
            (_, Element::Map(s), Element::Map(t)) => Element::Map(s.compose(t)),
            (_, Element::Bicyclic { a, b }, Element::Bicyclic { a: c, b: d }) => {
                let m = (*b).min(*c);
                Element::Bicyclic { a: a + c - m, b: b + d - m }
            }
            (_, Element::Munn { a, g, b }, Element::Munn { a: c, g: h, b: d }) => Element::Munn {
                a: (*a).min(g + c),
                g: g + h,
                b: (*b).max(g + d),
            },
            (Family::Product { group, .. }, Element::Pair { g, e }, Element::Pair { g: h, e: f }) => Element::Pair {
                g: group.mul(*g as usize, *h as usize) as u32,
                e: (*e).min(*f),
            },
            (_, Element::Chain(e), Element::Chain(f)) => Element::Chain((*e).min(*f)),
            (Family::Concrete(t), a, b) => t.mul(a, b),
            _ => panic!("mul on operands foreign to {}: {x}, {y}", self.name()),
        }
    }

    fn inv(&self, x: &Element) -> Element {
        match (&self.family, x) {
            (_, Element::Map(s)) => Element::Map(s.inverse()),
            (_, Element::Bicyclic { a, b }) => Element::Bicyclic { a: *b, b: *a },
            (_, Element::Munn { a, g, b }) => Element::Munn { a: a - g, g: -g, b: b - g },
            (Family::Product { group, .. }, Element::Pair { g, e }) => Element::Pair {
                g: group.inv(*g as usize) as u32,
                e: *e,
            },
            (_, Element::Chain(e)) => Element::Chain(*e),
            (Family::Concrete(t), a) => t.inv(a),
            _ => panic!("inv on an operand foreign to {}: {x}", self.name()),
        }
    }

    fn level(&self, e: &Element) -> u64 {
        match e {
            Element::Bicyclic { a, b } => a + b,
            Element::Munn { a, b, .. } => (b - a) as u64,
            Element::Pair { e, .. } | Element::Chain(e) => e.unsigned_abs(),
            _ => 0,
        }
    }

    fn is_finite(&self) -> bool {
        match &self.family {
            Family::SymmetricInverseMonoid { .. } | Family::Concrete(_) | Family::Generated { .. } => true,
            Family::Bicyclic | Family::Fim1 => false,
            Family::Product { chain, .. } | Family::Chain(chain) => chain.is_finite(),
        }
    }

    fn is_idempotent(&self, e: &Element) -> bool {
        match e {
            Element::Map(pb) => pb.is_idempotent(),
            Element::Bicyclic { a, b } => a == b,
            Element::Munn { g, .. } => *g == 0,
            _ => self.mul(e, e) == *e,
        }
    }

    fn d_related_unscoped(&self, a: &Element, b: &Element) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        match &self.family {
            Family::SymmetricInverseMonoid { .. } => {
                Ok(a.as_map().map(|m| m.rank()) == b.as_map().map(|m| m.rank()))
            }
            Family::Concrete(t) => t.d_related_unscoped(a, b),
            Family::Generated { .. } => {
                let closure = generate_closure(self, &self.generators(0), 1 << 16)?;
                if !closure.is_complete() {
                    return Err(Error::ScopeRequired);
                }
                green::d_related_in(self, &closure, a, b)
            }
            _ => Err(Error::ScopeRequired),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_validation_lists_constraint() {
        let err = make_family(&FamilyDescriptor::SymmetricInverseMonoid { n: 0 }).unwrap_err();
        assert!(err.to_string().contains("n >= 1"));
        let bad_group = FamilyDescriptor::Product {
            group: GroupDescriptor::Table { table: vec![vec![0, 1], vec![1, 1]], generators: None },
            chain: ChainKind::Nat,
        };
        assert!(make_family(&bad_group).is_err());
        let bad_chain = FamilyDescriptor::Chain { chain: ChainKind::Finite(0) };
        assert!(make_family(&bad_chain).unwrap_err().to_string().contains("length"));
    }

    #[test]
    fn shorthand_parsing() {
        assert!(matches!(
            FamilyDescriptor::parse("I3").unwrap(),
            FamilyDescriptor::SymmetricInverseMonoid { n: 3 }
        ));
        assert!(matches!(FamilyDescriptor::parse("fim1").unwrap(), FamilyDescriptor::Fim1));
        assert!(matches!(
            FamilyDescriptor::parse("Z2xN").unwrap(),
            FamilyDescriptor::Product { chain: ChainKind::Nat, .. }
        ));
        let json = r#"{"family":"product","group":{"cyclic":3},"chain":"negint"}"#;
        assert!(matches!(
            FamilyDescriptor::parse(json).unwrap(),
            FamilyDescriptor::Product { chain: ChainKind::NegInt, .. }
        ));
        assert!(FamilyDescriptor::parse("nonsense").is_err());
    }

    #[test]
    fn bicyclic_pq_is_identity() {
        let b = SemigroupOracle::bicyclic();
        let p = SemigroupOracle::bicyclic_p();
        let q = SemigroupOracle::bicyclic_q();
        assert_eq!(b.multiply(&p, &q).unwrap(), Element::Bicyclic { a: 0, b: 0 });
        // qp is an idempotent different from 1
        assert_eq!(b.mul(&q, &p), Element::Bicyclic { a: 1, b: 1 });
    }

    #[test]
    fn fim1_arithmetic() {
        let m = SemigroupOracle::fim1();
        let e = Element::Munn { a: -1, g: 0, b: 1 };
        assert_eq!(m.mul(&e, &e), e);
        assert_eq!(m.inv(&Element::Munn { a: 0, g: 1, b: 1 }), Element::Munn { a: -1, g: -1, b: 0 });
        assert_eq!(m.identity(), Some(Element::Munn { a: 0, g: 0, b: 0 }));
        assert!(!m.contains(&Element::Munn { a: 1, g: 0, b: 0 }));
    }

    #[test]
    fn product_is_componentwise_min() {
        let s = SemigroupOracle::product(GroupTable::cyclic(2).unwrap(), ChainKind::Nat);
        let a3 = Element::Pair { g: 1, e: 3 };
        let a5 = Element::Pair { g: 1, e: 5 };
        assert_eq!(s.multiply(&a3, &a5).unwrap(), Element::Pair { g: 0, e: 3 });
        assert!(s.multiply(&a3, &Element::Chain(2)).is_err());
    }

    #[test]
    fn mixed_oracle_operands_rejected() {
        let i3 = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let i2 = SemigroupOracle::symmetric_inverse_monoid(2).unwrap();
        let a = i2.pb(&[(1, 2)]).unwrap();
        let err = i3.multiply(&a, &a).unwrap_err();
        assert!(matches!(err, Error::DomainMismatch { .. }));
    }

    #[test]
    fn parse_keys_round_trip() {
        let f = SemigroupOracle::fim1();
        let e = Element::Munn { a: -2, g: 1, b: 3 };
        assert_eq!(f.parse_key(&e.to_json()).unwrap(), e);
        assert!(f.parse_key(&serde_json::json!([1, 0, 0])).is_err());
        let i3 = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let g = i3.pb(&[(1, 3), (2, 2)]).unwrap();
        assert_eq!(i3.parse_key(&g.to_json()).unwrap(), g);
    }
}
