use serde::{Deserialize, Serialize};

use super::space::FiniteMetricSpace;
use crate::semigroup::PartialBijection;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Colorer {
    /// Greedy in nonincreasing degree-sum order, at most `2Δ - 1` colours.
    #[default]
    Greedy,
    /// Misra–Gries, at most `Δ + 1` colours.
    MisraGries,
}

/// The graph `Γ_n` and its decomposition into matchings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub n: u64,
    pub edges: Vec<(usize, usize)>,
    pub max_degree: usize,
    pub matchings: Vec<Vec<(usize, usize)>>,
}

/// A self-inverse permutation of the points swapping one matching, weight `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Involution {
    pub level: u64,
    pub index: usize,
    pub weight: u64,
    pub map: PartialBijection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingFamily {
    pub points: usize,
    pub colorer: Colorer,
    pub levels: Vec<Level>,
    pub involutions: Vec<Involution>,
}

/// Builds `Γ_n` (edges at distance exactly `n`, the integer case of
/// `n-1 < d <= n`) for `1 <= n <= diam X`, colours each, and turns every
/// colour class into an involution of weight `n`.
pub fn build_matchings(x: &FiniteMetricSpace, colorer: Colorer) -> MatchingFamily {
    let n_pts = x.len();
    let mut levels = Vec::new();
    let mut involutions = Vec::new();
    for n in 1..=x.diameter() {
        let edges: Vec<(usize, usize)> = (0..n_pts)
            .flat_map(|i| ((i + 1)..n_pts).map(move |j| (i, j)))
            .filter(|&(i, j)| x.d(i, j) == n)
            .collect();
        let mut deg = vec![0usize; n_pts];
        for &(i, j) in &edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        let max_degree = deg.iter().copied().max().unwrap_or(0);
        let colors = match colorer {
            Colorer::Greedy => greedy_coloring(n_pts, &edges, &deg),
            Colorer::MisraGries => misra_gries(n_pts, &edges, max_degree),
        };
        let palette = colors.iter().map(|c| c + 1).max().unwrap_or(0);
        let mut matchings = vec![Vec::new(); palette];
        for (e, &c) in edges.iter().zip(&colors) {
            matchings[c].push(*e);
        }
        for (j, m) in matchings.iter().enumerate() {
            let mut image: Vec<u32> = (1..=n_pts as u32).collect();
            for &(a, b) in m {
                image.swap(a, b);
            }
            let map = PartialBijection::permutation(&image).expect("swaps of a permutation");
            involutions.push(Involution { level: n, index: j, weight: n, map });
        }
        levels.push(Level { n, edges, max_degree, matchings });
    }
    MatchingFamily { points: n_pts, colorer, levels, involutions }
}

fn greedy_coloring(n: usize, edges: &[(usize, usize)], deg: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&k| {
        let (u, v) = edges[k];
        (std::cmp::Reverse(deg[u] + deg[v]), u, v)
    });
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut colors = vec![0; edges.len()];
    for k in order {
        let (u, v) = edges[k];
        let c = (0..).find(|c| !used[u].contains(c) && !used[v].contains(c)).expect("unbounded palette");
        used[u].push(c);
        used[v].push(c);
        colors[k] = c;
    }
    colors
}

/// Misra–Gries edge colouring with `Δ + 1` colours.
fn misra_gries(n: usize, edges: &[(usize, usize)], max_degree: usize) -> Vec<usize> {
    let k = max_degree + 1;
    // at[v][c] = neighbour joined to v by an edge of colour c
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; k]; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let color_of = |at: &Vec<Vec<Option<usize>>>, u: usize, v: usize| (0..k).find(|&c| at[u][c] == Some(v));
    let free = |at: &Vec<Vec<Option<usize>>>, v: usize, c: usize| at[v][c].is_none();
    let set = |at: &mut Vec<Vec<Option<usize>>>, u: usize, v: usize, c: usize| {
        at[u][c] = Some(v);
        at[v][c] = Some(u);
    };
    let unset = |at: &mut Vec<Vec<Option<usize>>>, u: usize, v: usize, c: usize| {
        at[u][c] = None;
        at[v][c] = None;
    };
    for &(u, v0) in edges {
        // maximal fan of u starting at v0
        let mut fan = vec![v0];
        loop {
            let last = *fan.last().expect("nonempty fan");
            let next = adj[u].iter().copied().find(|&w| {
                !fan.contains(&w) && color_of(&at, u, w).is_some_and(|c| free(&at, last, c))
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = (0..k).find(|&c| free(&at, u, c)).expect("Δ+1 colours leave one free at u");
        let d = (0..k).find(|&d| free(&at, *fan.last().unwrap(), d)).expect("free colour at fan end");
        // invert the cd-path from u, which starts with a d-edge since c is free at u
        if c != d {
            let mut path = Vec::new();
            let mut cur = u;
            let mut want = d;
            while let Some(nx) = at[cur][want] {
                path.push((cur, nx, want));
                cur = nx;
                want = if want == d { c } else { d };
            }
            for &(a, b, col) in &path {
                unset(&mut at, a, b, col);
            }
            for &(a, b, col) in &path {
                set(&mut at, a, b, if col == d { c } else { d });
            }
        }
        // shortest fan prefix ending at a vertex where d is free
        let mut end = fan.len() - 1;
        for (i, &w) in fan.iter().enumerate() {
            let prefix_ok = (0..i).all(|j| color_of(&at, u, fan[j + 1]).is_some_and(|cc| free(&at, fan[j], cc)));
            if free(&at, w, d) && prefix_ok {
                end = i;
                break;
            }
        }
        for i in 0..end {
            let cc = color_of(&at, u, fan[i + 1]).expect("fan edge coloured");
            unset(&mut at, u, fan[i + 1], cc);
            set(&mut at, u, fan[i], cc);
        }
        set(&mut at, u, fan[end], d);
    }
    edges.iter().map(|&(u, v)| color_of(&at, u, v).expect("every edge coloured")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path3() -> FiniteMetricSpace {
        FiniteMetricSpace::from_csv("0,1,2\n1,0,1\n2,1,0\n").unwrap()
    }

    fn check_family(x: &FiniteMetricSpace, f: &MatchingFamily, bound: impl Fn(usize) -> usize) {
        for lvl in &f.levels {
            let mut all: Vec<(usize, usize)> = lvl.matchings.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, lvl.edges, "matchings partition Γ_{}", lvl.n);
            for m in &lvl.matchings {
                let mut ends: Vec<usize> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
                let len = ends.len();
                ends.sort();
                ends.dedup();
                assert_eq!(ends.len(), len, "matching shares an endpoint");
            }
            assert!(lvl.matchings.len() <= bound(lvl.max_degree).max(0));
        }
        for inv in &f.involutions {
            assert_eq!(inv.map.compose(&inv.map), PartialBijection::identity_on(x.len() as u32, 1..=x.len() as u32).unwrap());
            for &(s, t) in inv.map.pairs() {
                if s != t {
                    assert_eq!(x.d(s as usize - 1, t as usize - 1), inv.weight);
                }
            }
        }
    }

    #[test]
    fn path_space_needs_two_matchings() {
        let x = path3();
        let f = build_matchings(&x, Colorer::Greedy);
        assert_eq!(f.levels[0].matchings.len(), 2);
        assert_eq!(f.levels.len(), 2);
        check_family(&x, &f, |d| 2 * d - 1);
    }

    #[test]
    fn palette_bounds_on_random_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = FiniteMetricSpace::random(&mut rng, 25, 4);
            let g = build_matchings(&x, Colorer::Greedy);
            check_family(&x, &g, |d| (2 * d).saturating_sub(1));
            let m = build_matchings(&x, Colorer::MisraGries);
            check_family(&x, &m, |d| if d == 0 { 0 } else { d + 1 });
        }
    }

    #[test]
    fn singleton_space_has_no_levels() {
        let x = FiniteMetricSpace::from_csv("0\n").unwrap();
        let f = build_matchings(&x, Colorer::Greedy);
        assert!(f.levels.is_empty() && f.involutions.is_empty());
    }
}
