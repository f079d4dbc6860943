//! Extended word metrics on inverse semigroups, length functions, and
//! their validation over finite or truncated scopes.

mod graph;
mod length;
mod lemmas;
pub(crate) mod search;
mod table;
mod validate;

pub use graph::{schuetzenberger_graph, SchutzenbergerGraph};
pub use length::{filtration_length, length_from_metric, metric_from_length, LengthAudit, LengthFunction};
pub use lemmas::{
    check_d_class_isometry, check_domination, check_inverse_isometry, check_subinvariance_bound, LemmaReport,
};
pub(crate) use graph::dot_escape;
pub(crate) use table::NODE_CAP;
pub use table::{complete_word_metric, weighted_word_metric, Dist, MetricClass, MetricTable, Scope};
pub use validate::{
    coarse_triviality, cylinder_and_fub, properness_witness, validate_metric, validate_witness, word_ball_witness,
    AxiomAudit, CylinderReport, SubinvarianceAudit, ValidationReport, WitnessSearch,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{Element, InverseSemigroup};

/// A symmetric generating set with positive integer weights, `w(x) = w(x*)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGenerators {
    entries: Vec<(Element, u64)>,
}

impl WeightedGenerators {
    /// Takes the list as given and checks that it is closed under inversion
    /// with matching weights.
    pub fn new<S: InverseSemigroup + ?Sized>(s: &S, entries: impl IntoIterator<Item = (Element, u64)>) -> Result<Self> {
        let map = Self::collect(s, entries)?;
        for (x, w) in &map {
            match map.get(&s.inv(x)) {
                Some(wi) if wi == w => {}
                Some(wi) => {
                    return Err(Error::InvalidElement(format!("w({x}) = {w} but w({x}*) = {wi}")));
                }
                None => return Err(Error::InvalidElement(format!("inverse of generator {x} is missing"))),
            }
        }
        Ok(Self { entries: map.into_iter().collect() })
    }

    /// Adds the inverse of every generator with the same weight.
    pub fn symmetric<S: InverseSemigroup + ?Sized>(
        s: &S,
        entries: impl IntoIterator<Item = (Element, u64)>,
    ) -> Result<Self> {
        let mut map = Self::collect(s, entries)?;
        let given: Vec<(Element, u64)> = map.iter().map(|(x, w)| (x.clone(), *w)).collect();
        for (x, w) in given {
            let xi = s.inv(&x);
            match map.get(&xi) {
                Some(&wi) if wi != w => {
                    return Err(Error::InvalidElement(format!("w({x}) = {w} but w({xi}) = {wi}")));
                }
                _ => {
                    map.insert(xi, w);
                }
            }
        }
        Ok(Self { entries: map.into_iter().collect() })
    }

    pub fn unit<S: InverseSemigroup + ?Sized>(s: &S, gens: &[Element]) -> Result<Self> {
        Self::symmetric(s, gens.iter().map(|g| (g.clone(), 1)))
    }

    fn collect<S: InverseSemigroup + ?Sized>(
        s: &S,
        entries: impl IntoIterator<Item = (Element, u64)>,
    ) -> Result<BTreeMap<Element, u64>> {
        let mut map = BTreeMap::new();
        for (x, w) in entries {
            s.check(&x)?;
            if w == 0 {
                return Err(Error::InvalidElement(format!("generator {x} has weight 0")));
            }
            if let Some(old) = map.insert(x.clone(), w) {
                if old != w {
                    return Err(Error::InvalidElement(format!("generator {x} listed with weights {old} and {w}")));
                }
            }
        }
        Ok(map)
    }

    pub fn entries(&self) -> &[(Element, u64)] {
        &self.entries
    }

    pub fn elements(&self) -> Vec<Element> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn weight(&self, x: &Element) -> Option<u64> {
        self.entries.binary_search_by(|(y, _)| y.cmp(x)).ok().map(|i| self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self { entries: self.entries.iter().map(|(x, w)| (x.clone(), w * k)).collect() }
    }
}

impl Serialize for WeightedGenerators {
    fn serialize<Se: serde::Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let rows: Vec<(&Element, u64)> = self.entries.iter().map(|(x, w)| (x, *w)).collect();
        rows.serialize(serializer)
    }
}

/// Neighbours of `x` in the Schützenberger graph: `gx` for each generator
/// `g` with `g*gx = x`, loops excluded.
pub(crate) fn left_steps<S: InverseSemigroup + ?Sized>(
    s: &S,
    gens: &WeightedGenerators,
    x: &Element,
) -> Vec<(Element, u64)> {
    let mut out = Vec::new();
    for (g, w) in gens.entries() {
        let y = s.mul(g, x);
        if y != *x && s.mul(&s.inv(g), &y) == *x {
            out.push((y, *w));
        }
    }
    out
}
