use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::search::{all_pairs, dijkstra};
use super::{left_steps, WeightedGenerators};
use crate::error::{Error, Result};
use crate::semigroup::{Element, FiniteSemigroup, InverseSemigroup};

/// Upper bound on the number of vertices settled per L-class search.
pub const NODE_CAP: usize = 200_000;

/// An extended distance: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dist {
    Finite(u64),
    Inf,
}

impl Dist {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Inf => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dist::Finite(d) => serializer.serialize_u64(*d),
            Dist::Inf => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    /// Every element of a finite semigroup, every L-class complete.
    Complete,
    /// Classes around basepoints of level `<= depth`, explored up to `radius`.
    Ball { depth: u64, radius: Option<u64> },
}

/// One L-class of a metric table: sorted members and their distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricClass {
    pub idempotent: Element,
    pub members: Vec<Element>,
    /// Distance from the nearest basepoint of the class.
    pub depth: Vec<u64>,
    /// Family level of each member.
    pub level: Vec<u64>,
    /// `false` if the exploration of the class was cut off.
    pub complete: bool,
    dist: Vec<u64>,
}

impl MetricClass {
    pub(crate) fn new(
        idempotent: Element,
        members: Vec<Element>,
        depth: Vec<u64>,
        level: Vec<u64>,
        complete: bool,
        dist: Vec<u64>,
    ) -> Self {
        Self { idempotent, members, depth, level, complete, dist }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.members.len() + j]
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.members.binary_search(e).ok()
    }

    pub fn diameter(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// Per-L-class distance tables; distances across classes are infinite.
#[derive(Clone, Debug)]
pub struct MetricTable {
    scope: Scope,
    classes: Vec<MetricClass>,
    index: HashMap<Element, (usize, usize)>,
}

impl PartialEq for MetricTable {
    fn eq(&self, other: &Self) -> bool {
        self.scope == other.scope && self.classes == other.classes
    }
}

impl Eq for MetricTable {}

impl MetricTable {
    pub(crate) fn from_classes(scope: Scope, mut classes: Vec<MetricClass>) -> Self {
        classes.sort_by(|a, b| a.idempotent.cmp(&b.idempotent));
        let mut index = HashMap::new();
        for (ci, c) in classes.iter().enumerate() {
            for (mi, m) in c.members.iter().enumerate() {
                index.insert(m.clone(), (ci, mi));
            }
        }
        Self { scope, classes, index }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn is_complete(&self) -> bool {
        self.scope == Scope::Complete
    }

    pub fn classes(&self) -> &[MetricClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// All elements in canonical key order.
    pub fn elements(&self) -> Vec<Element> {
        let mut all: Vec<Element> = self.index.keys().cloned().collect();
        all.sort();
        all
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.index.contains_key(e)
    }

    pub fn locate(&self, e: &Element) -> Option<(usize, usize)> {
        self.index.get(e).copied()
    }

    pub fn class_of(&self, e: &Element) -> Option<&MetricClass> {
        self.locate(e).map(|(c, _)| &self.classes[c])
    }

    pub fn level(&self, e: &Element) -> Option<u64> {
        self.locate(e).map(|(c, i)| self.classes[c].level[i])
    }

    pub fn depth(&self, e: &Element) -> Option<u64> {
        self.locate(e).map(|(c, i)| self.classes[c].depth[i])
    }

    /// `None` if either element is outside the table.
    pub fn distance(&self, a: &Element, b: &Element) -> Option<Dist> {
        let (ca, ia) = self.locate(a)?;
        let (cb, ib) = self.locate(b)?;
        Some(if ca == cb { Dist::Finite(self.classes[ca].d(ia, ib)) } else { Dist::Inf })
    }

    pub fn max_level(&self) -> u64 {
        self.classes.iter().flat_map(|c| c.level.iter().copied()).max().unwrap_or(0)
    }

    /// Sub-table on the members satisfying `keep`, distances inherited.
    pub fn restrict(&self, mut keep: impl FnMut(&Element, u64) -> bool) -> MetricTable {
        let mut classes = Vec::new();
        for c in &self.classes {
            let idx: Vec<usize> = (0..c.len()).filter(|&i| keep(&c.members[i], c.level[i])).collect();
            if idx.is_empty() {
                continue;
            }
            let mut dist = Vec::with_capacity(idx.len() * idx.len());
            for &i in &idx {
                for &j in &idx {
                    dist.push(c.d(i, j));
                }
            }
            classes.push(MetricClass {
                idempotent: c.idempotent.clone(),
                members: idx.iter().map(|&i| c.members[i].clone()).collect(),
                depth: idx.iter().map(|&i| c.depth[i]).collect(),
                level: idx.iter().map(|&i| c.level[i]).collect(),
                complete: c.complete && idx.len() == c.len(),
                dist,
            });
        }
        let scope = match self.scope {
            Scope::Complete if classes.iter().map(|c| c.len()).sum::<usize>() == self.len() => Scope::Complete,
            Scope::Complete => Scope::Ball { depth: self.max_level(), radius: None },
            other => other,
        };
        MetricTable::from_classes(scope, classes)
    }

    /// CSV distance matrix over all elements in key order, `inf` across classes.
    pub fn to_csv(&self) -> String {
        let elems = self.elements();
        let mut out = String::from("key");
        for e in &elems {
            out.push(',');
            out.push_str(&csv_field(&e.to_string()));
        }
        out.push('\n');
        for a in &elems {
            out.push_str(&csv_field(&a.to_string()));
            for b in &elems {
                out.push(',');
                out.push_str(&self.distance(a, b).expect("own element").to_string());
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Serialize for MetricClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.len();
        let rows: Vec<&[u64]> = (0..n).map(|i| &self.dist[i * n..(i + 1) * n]).collect();
        let mut st = serializer.serialize_struct("MetricClass", 5)?;
        st.serialize_field("idempotent", &self.idempotent)?;
        st.serialize_field("complete", &self.complete)?;
        st.serialize_field("members", &self.members)?;
        st.serialize_field("depth", &self.depth)?;
        st.serialize_field("distances", &rows)?;
        st.end()
    }
}

impl Serialize for MetricTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MetricTable", 3)?;
        st.serialize_field("scope", &self.scope)?;
        st.serialize_field("elements", &self.len())?;
        st.serialize_field("classes", &self.classes)?;
        st.end()
    }
}

/// Weighted word metric over the L-classes of the given basepoints.
///
/// Each class is explored by Dijkstra along the Schützenberger graph from
/// its basepoints, up to `radius` if given. Distances are then shortest
/// paths inside the explored vertex set; they are exact for complete classes
/// and upper bounds of the explored ball otherwise.
pub fn weighted_word_metric<S: InverseSemigroup + ?Sized>(
    s: &S,
    gens: &WeightedGenerators,
    basepoints: &[Element],
    radius: Option<u64>,
) -> Result<MetricTable> {
    for b in basepoints {
        s.check(b)?;
    }
    let depth = basepoints.iter().map(|b| s.level(b)).max().unwrap_or(0);
    build(s, gens, basepoints, radius, Scope::Ball { depth, radius })
}

/// Word metric on every L-class of a complete finite semigroup.
pub fn complete_word_metric(s: &FiniteSemigroup, gens: &WeightedGenerators) -> Result<MetricTable> {
    if !s.is_complete() {
        return Err(Error::InvalidElement("complete word metric needs a complete closure".into()));
    }
    let table = build(s, gens, &s.idempotents(), None, Scope::Complete)?;
    if table.len() != s.len() || table.classes().iter().any(|c| !c.complete) {
        return Err(Error::InvalidElement(
            "generators do not reach every element of its L-class".into(),
        ));
    }
    Ok(table)
}

fn build<S: InverseSemigroup + ?Sized>(
    s: &S,
    gens: &WeightedGenerators,
    basepoints: &[Element],
    radius: Option<u64>,
    scope: Scope,
) -> Result<MetricTable> {
    let mut groups: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    for b in basepoints {
        groups.entry(s.source_idempotent(b)).or_default().push(b.clone());
    }
    let mut classes = Vec::with_capacity(groups.len());
    for (idempotent, sources) in groups {
        let search = dijkstra(&sources, |x| left_steps(s, gens, x), radius, NODE_CAP);
        let mut members: Vec<Element> = search.dist.keys().cloned().collect();
        members.sort();
        let pos: HashMap<&Element, usize> = members.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let adj: Vec<Vec<(usize, u64)>> = members
            .iter()
            .map(|m| {
                left_steps(s, gens, m)
                    .into_iter()
                    .filter_map(|(y, w)| pos.get(&y).map(|&j| (j, w)))
                    .collect()
            })
            .collect();
        let dist = all_pairs(&adj)
            .into_iter()
            .map(|d| d.ok_or_else(|| Error::InvalidElement("explored class is disconnected".into())))
            .collect::<Result<Vec<u64>>>()?;
        let depth = members.iter().map(|m| search.dist[m]).collect();
        let level = members.iter().map(|m| s.level(m)).collect();
        classes.push(MetricClass {
            idempotent,
            members,
            depth,
            level,
            complete: !search.pruned,
            dist,
        });
    }
    let scope = match scope {
        Scope::Complete if classes.iter().any(|c| !c.complete) => Scope::Ball { depth: 0, radius },
        other => other,
    };
    Ok(MetricTable::from_classes(scope, classes))
}
