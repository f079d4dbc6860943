use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::hash::Hash;

/// Result of a bounded multi-source Dijkstra search over an implicit graph.
pub(crate) struct Search<N> {
    pub dist: HashMap<N, u64>,
    /// `true` if some vertex was left out because of the bound or node cap.
    pub pruned: bool,
}

/// Ties are settled in key order.
pub(crate) fn dijkstra<N, F>(sources: &[N], mut neighbours: F, bound: Option<u64>, node_cap: usize) -> Search<N>
where
    N: Clone + Ord + Hash,
    F: FnMut(&N) -> Vec<(N, u64)>,
{
    let mut dist: HashMap<N, u64> = HashMap::new();
    let mut settled: HashSet<N> = HashSet::new();
    let mut beyond: HashSet<N> = HashSet::new();
    let mut heap = BinaryHeap::new();
    for s in sources {
        if dist.insert(s.clone(), 0).is_none() {
            heap.push(Reverse((0u64, s.clone())));
        }
    }
    let mut pruned = false;
    while let Some(Reverse((d, u))) = heap.pop() {
        if settled.contains(&u) || dist.get(&u) != Some(&d) {
            continue;
        }
        if settled.len() >= node_cap {
            pruned = true;
            break;
        }
        settled.insert(u.clone());
        for (v, w) in neighbours(&u) {
            let nd = d + w;
            if bound.is_some_and(|b| nd > b) {
                beyond.insert(v);
                continue;
            }
            let better = match dist.get(&v) {
                None => true,
                Some(&old) => nd < old,
            };
            if better && !settled.contains(&v) {
                dist.insert(v.clone(), nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist.retain(|k, _| settled.contains(k));
    if beyond.iter().any(|v| !settled.contains(v)) {
        pruned = true;
    }
    Search { dist, pruned }
}

/// All-pairs shortest paths on a small weighted graph given by adjacency lists.
pub(crate) fn all_pairs(adj: &[Vec<(usize, u64)>]) -> Vec<Option<u64>> {
    let n = adj.len();
    let mut out = vec![None; n * n];
    for src in 0..n {
        let mut dist = vec![None; n];
        dist[src] = Some(0u64);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if dist[v].is_none_or(|old| nd < old) {
                    dist[v] = Some(nd);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        out[src * n..(src + 1) * n].copy_from_slice(&dist);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_with_bound() {
        let nb = |&x: &i64| vec![(x - 1, 1), (x + 1, 1)];
        let s = dijkstra(&[0i64], nb, Some(3), usize::MAX);
        assert_eq!(s.dist.len(), 7);
        assert!(s.pruned);
        assert_eq!(s.dist[&-3], 3);
    }

    #[test]
    fn all_pairs_on_triangle() {
        let adj = vec![vec![(1, 1), (2, 5)], vec![(0, 1), (2, 1)], vec![(0, 5), (1, 1)]];
        let d = all_pairs(&adj);
        assert_eq!(d[2], Some(2));
        assert_eq!(d[3 * 2], Some(2));
    }
}
