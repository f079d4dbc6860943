use std::fmt::Write;

use serde::Serialize;

use super::search::dijkstra;
use super::table::NODE_CAP;
use super::{left_steps, WeightedGenerators};
use crate::error::Result;
use crate::semigroup::{Element, InverseSemigroup};

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: Element,
    pub weight: u64,
}

/// Ball of a Schützenberger graph: vertices in `L_s`, labelled edges `t -> xt`.
#[derive(Clone, Debug, Serialize)]
pub struct SchutzenbergerGraph {
    pub root: Element,
    pub radius: u64,
    pub vertices: Vec<Element>,
    pub edges: Vec<GraphEdge>,
}

impl SchutzenbergerGraph {
    pub fn loops(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| e.from == e.to)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph schuetzenberger {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&v.to_string()));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}\", weight={}];",
                e.from,
                e.to,
                dot_escape(&e.label.to_string()),
                e.weight
            );
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Vertices within weighted distance `radius` of `root` in its L-class.
pub fn schuetzenberger_graph<S: InverseSemigroup + ?Sized>(
    s: &S,
    gens: &WeightedGenerators,
    root: &Element,
    radius: u64,
) -> Result<SchutzenbergerGraph> {
    s.check(root)?;
    let search = dijkstra(std::slice::from_ref(root), |x| left_steps(s, gens, x), Some(radius), NODE_CAP);
    let mut vertices: Vec<Element> = search.dist.keys().cloned().collect();
    vertices.sort();
    let mut edges = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        for (g, w) in gens.entries() {
            let y = s.mul(g, v);
            if s.mul(&s.inv(g), &y) != *v {
                continue;
            }
            if let Ok(j) = vertices.binary_search(&y) {
                edges.push(GraphEdge { from: i, to: j, label: g.clone(), weight: *w });
            }
        }
    }
    Ok(SchutzenbergerGraph { root: root.clone(), radius, vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{ChainKind, GroupTable, SemigroupOracle};

    #[test]
    fn idempotent_generators_only_loop() {
        let o = SemigroupOracle::symmetric_inverse_monoid(3).unwrap();
        let e = o.pb(&[(1, 1), (2, 2)]).unwrap();
        let gens = WeightedGenerators::unit(&o, &[e.clone()]).unwrap();
        let g = schuetzenberger_graph(&o, &gens, &o.pb(&[(1, 2)]).unwrap(), 5).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.iter().all(|x| x.from == x.to));
        assert_eq!(g.loops().count(), 1);
    }

    #[test]
    fn bicyclic_class_is_a_ray() {
        let b = SemigroupOracle::bicyclic();
        let gens = WeightedGenerators::unit(&b, &b.generators(0)).unwrap();
        let qp = Element::Bicyclic { a: 1, b: 1 };
        let g = schuetzenberger_graph(&b, &gens, &qp, 4).unwrap();
        // q^a p for a = 0..=5 (radius 4 from a = 1)
        assert_eq!(g.vertices.len(), 6);
        assert_eq!(g.edges.iter().filter(|e| e.from != e.to).count(), 10);
        assert!(g.to_dot().contains("->"));
    }

    #[test]
    fn product_components_are_cayley_graphs() {
        let s = SemigroupOracle::product(GroupTable::cyclic(3).unwrap(), ChainKind::Nat);
        let gens = WeightedGenerators::unit(&s, &s.generators(4)).unwrap();
        let g = schuetzenberger_graph(&s, &gens, &Element::Pair { g: 0, e: 2 }, 10).unwrap();
        assert_eq!(g.vertices.len(), 3);
        // generators (1,n),(2,n) with n >= 2 act as the Z3 Cayley generators
        let distinct: std::collections::BTreeSet<(usize, usize)> =
            g.edges.iter().map(|e| (e.from, e.to)).collect();
        assert_eq!(distinct.len(), 6);
    }
}
