use std::collections::{BTreeMap, VecDeque};

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use serde_json::json;

use super::{CoarseVerdict, Property, Status, Witness};
use crate::metric::search::dijkstra;
use crate::metric::{Dist, MetricClass, MetricTable, Scope, WeightedGenerators};
use crate::semigroup::{Element, InverseSemigroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub class: Element,
    pub members: Vec<Element>,
    pub size: usize,
    pub diameter: u64,
    /// The block provably does not continue past the scope.
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RComponentPartition {
    pub scale: u64,
    pub scope: Scope,
    pub blocks: Vec<Block>,
}

impl RComponentPartition {
    pub fn max_size(&self) -> usize {
        self.blocks.iter().map(|b| b.size).max().unwrap_or(0)
    }

    pub fn max_diameter(&self) -> u64 {
        self.blocks.iter().map(|b| b.diameter).max().unwrap_or(0)
    }

    pub fn block_of(&self, e: &Element) -> Option<usize> {
        self.blocks.iter().position(|b| b.members.binary_search(e).is_ok())
    }

    /// `key,block,size` rows in block order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,block,size\n");
        for (i, b) in self.blocks.iter().enumerate() {
            for m in &b.members {
                let key = m.to_string();
                let key = if key.contains([',', '"']) { format!("\"{}\"", key.replace('"', "\"\"")) } else { key };
                out.push_str(&format!("{key},{i},{}\n", b.size));
            }
        }
        out
    }
}

fn class_blocks(c: &MetricClass, r: u64, radius: Option<u64>, order: &[usize]) -> Vec<Block> {
    let n = c.len();
    let mut uf = UnionFind::<usize>::new(n);
    for &i in order {
        for &j in order {
            if i != j && c.d(i, j) <= r {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    groups
        .into_values()
        .map(|idx| {
            let diameter = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).map(|(i, j)| c.d(i, j)).max().unwrap_or(0);
            let closed = c.complete || radius.is_some_and(|rad| idx.iter().all(|&i| c.depth[i] + r <= rad));
            Block {
                class: c.idempotent.clone(),
                members: idx.iter().map(|&i| c.members[i].clone()).collect(),
                size: idx.len(),
                diameter,
                closed,
            }
        })
        .collect()
}

fn partition_with(d: &MetricTable, r: u64, mut order_for: impl FnMut(&MetricClass) -> Vec<usize>) -> RComponentPartition {
    let radius = match d.scope() {
        Scope::Complete => None,
        Scope::Ball { radius, .. } => radius,
    };
    let mut blocks: Vec<Block> = Vec::new();
    for c in d.classes() {
        blocks.extend(class_blocks(c, r, radius, &order_for(c)));
    }
    blocks.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    RComponentPartition { scale: r, scope: d.scope(), blocks }
}

/// Classes of the equivalence generated by `d(x, y) <= r`, ordered by least key.
pub fn r_components(d: &MetricTable, r: u64) -> RComponentPartition {
    partition_with(d, r, |c| (0..c.len()).collect())
}

/// A chain of `r`-steps inside one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub scale: u64,
    pub points: Vec<Element>,
    pub hops: usize,
    pub steps: Vec<u64>,
    /// `(i-1) r < d(x_0, x_i) <= i r` for every point of the path.
    pub spacing_ok: bool,
}

/// Lexicographically least shortest `r`-path from the least member of the
/// block to the member farthest from it in hops (ties to the least key).
fn path_witness(d: &MetricTable, block: &Block, r: u64) -> PathWitness {
    let n = block.members.len();
    let dist = |i: usize, j: usize| d.distance(&block.members[i], &block.members[j]).and_then(Dist::finite).unwrap_or(u64::MAX);
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && dist(i, j) <= r).collect()).collect();
    let bfs = |src: usize| {
        let mut hop = vec![usize::MAX; n];
        hop[src] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if hop[v] == usize::MAX {
                    hop[v] = hop[u] + 1;
                    q.push_back(v);
                }
            }
        }
        hop
    };
    let from_start = bfs(0);
    let target = (0..n).filter(|&i| from_start[i] != usize::MAX).max_by_key(|&i| (from_start[i], std::cmp::Reverse(i))).unwrap_or(0);
    let to_target = bfs(target);
    let mut path = vec![0usize];
    let mut cur = 0;
    while cur != target {
        cur = *adj[cur].iter().filter(|&&v| to_target[v] + 1 == to_target[cur]).min().expect("connected block");
        path.push(cur);
    }
    let steps: Vec<u64> = path.windows(2).map(|w| dist(w[0], w[1])).collect();
    let spacing_ok = path.iter().enumerate().skip(1).all(|(i, &p)| {
        let di = dist(0, p);
        (i as u64 - 1) * r < di && di <= i as u64 * r
    });
    PathWitness {
        scale: r,
        points: path.iter().map(|&i| block.members[i].clone()).collect(),
        hops: path.len() - 1,
        steps,
        spacing_ok,
    }
}

fn largest_block(p: &RComponentPartition) -> Option<&Block> {
    p.blocks.iter().max_by(|a, b| a.size.cmp(&b.size).then(b.members[0].cmp(&a.members[0])))
}

fn scope_scale(d: &MetricTable) -> u64 {
    match d.scope() {
        Scope::Complete => 0,
        Scope::Ball { depth, .. } => depth,
    }
}

/// Uniform boundedness of `r`-components. On truncations the maximal block
/// size is tracked over level sub-scopes up to the scope depth; strict growth
/// over the upper half refutes at scale, with a long `r`-path as witness.
pub fn asdim0_evidence(d: &MetricTable, scales: &[u64]) -> CoarseVerdict {
    let mut stats = Vec::new();
    let mut refuted: Option<(u64, PathWitness)> = None;
    for &r in scales {
        let full = r_components(d, r);
        if d.is_complete() {
            stats.push(json!({ "scale": r, "max_size": full.max_size(), "max_diameter": full.max_diameter() }));
            continue;
        }
        let top = scope_scale(d).min(d.max_level());
        let by_level: Vec<usize> = (0..=top).map(|k| r_components(&d.restrict(|_, lv| lv <= k), r).max_size()).collect();
        let grows = by_level[top as usize] > by_level[top as usize / 2];
        stats.push(json!({
            "scale": r,
            "max_size": full.max_size(),
            "max_diameter": full.max_diameter(),
            "max_size_by_level": by_level,
            "grows": grows,
        }));
        if grows && refuted.is_none() {
            if let Some(b) = largest_block(&full) {
                refuted = Some((r, path_witness(d, b, r)));
            }
        }
    }
    let status = if d.is_complete() {
        Status::Established
    } else if let Some((_, w)) = refuted {
        Status::RefutedAtScale { scale: scope_scale(d), witness: Witness::Path(w) }
    } else {
        Status::EvidenceAtScale { scale: scope_scale(d), consistent: true }
    };
    CoarseVerdict { property: Property::AsDim0, status, statistics: json!(stats) }
}

/// Finiteness of `r`-components. A block counts as finite only if it is
/// closed inside the scope; blocks touching the frontier are indeterminate.
pub fn sparse_evidence(d: &MetricTable, scales: &[u64]) -> CoarseVerdict {
    let mut stats = Vec::new();
    let mut indeterminate_total = 0;
    for &r in scales {
        let p = r_components(d, r);
        let closed: Vec<&Block> = p.blocks.iter().filter(|b| b.closed).collect();
        let indeterminate = p.blocks.len() - closed.len();
        indeterminate_total += indeterminate;
        stats.push(json!({
            "scale": r,
            "closed": closed.len(),
            "indeterminate": indeterminate,
            "max_closed_size": closed.iter().map(|b| b.size).max().unwrap_or(0),
        }));
    }
    let status = if d.is_complete() {
        Status::Established
    } else {
        Status::EvidenceAtScale { scale: scope_scale(d), consistent: indeterminate_total == 0 }
    };
    CoarseVerdict { property: Property::Sparse, status, statistics: json!(stats) }
}

/// Recomputes every step of a path witness with a fresh bounded search on
/// the oracle, independent of the table it came from.
pub fn revalidate_witness<S: InverseSemigroup + ?Sized>(s: &S, gens: &WeightedGenerators, w: &PathWitness) -> bool {
    let mut seen = w.points.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != w.points.len() || w.hops + 1 != w.points.len() {
        return false;
    }
    w.points.windows(2).all(|pair| {
        let search = dijkstra(
            std::slice::from_ref(&pair[0]),
            |x| crate::metric::left_steps(s, gens, x),
            Some(w.scale),
            crate::metric::NODE_CAP,
        );
        search.dist.get(&pair[1]).is_some_and(|&v| v <= w.scale)
    })
}
