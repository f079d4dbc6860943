use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

/// A finite metric space with positive integer distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<u64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<u64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSpace("no points".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSpace(format!("distance matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if dist[i][i] != 0 {
                return Err(Error::InvalidSpace(format!("d({0},{0}) != 0", labels[i])));
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::InvalidSpace(format!("asymmetric at ({}, {})", labels[i], labels[j])));
                }
                if i != j && dist[i][j] == 0 {
                    return Err(Error::InvalidSpace(format!("distinct points {} and {} at distance 0", labels[i], labels[j])));
                }
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::InvalidSpace(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(Self { labels, dist })
    }

    /// Square matrix, optionally with a header row and a leading label column.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows: Vec<Vec<String>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(|f| f.trim().to_string()).collect())
            .collect();
        if rows.is_empty() {
            return Err(Error::InvalidSpace("empty CSV".into()));
        }
        let numeric = |f: &String| f.parse::<u64>().is_ok();
        let header = !rows[0].iter().all(numeric);
        let body = if header { &rows[1..] } else { &rows[..] };
        let n = body.len();
        let labelled = body.iter().all(|r| r.len() == n + 1);
        let labels: Vec<String> = if header {
            let h = &rows[0];
            if h.len() == n + 1 { h[1..].to_vec() } else { h.clone() }
        } else if labelled {
            body.iter().map(|r| r[0].clone()).collect()
        } else {
            (0..n).map(|i| i.to_string()).collect()
        };
        let dist = body
            .iter()
            .map(|r| {
                let cells = if labelled { &r[1..] } else { &r[..] };
                cells
                    .iter()
                    .map(|c| c.parse::<u64>().map_err(|_| Error::InvalidSpace(format!("not a distance: {c:?}"))))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, dist)
    }

    /// `{"points": n | [labels], "edges": [[i, j, w], ..]}`; the metric is the
    /// shortest-path metric of the weighted graph.
    pub fn from_edge_list_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Points {
            Count(usize),
            Labels(Vec<String>),
        }
        #[derive(Deserialize)]
        struct Doc {
            points: Points,
            edges: Vec<(usize, usize, u64)>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        let labels = match doc.points {
            Points::Count(n) => (0..n).map(|i| i.to_string()).collect(),
            Points::Labels(l) => l,
        };
        let n = labels.len();
        let mut d = vec![vec![u64::MAX; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(i, j, w) in &doc.edges {
            if i >= n || j >= n || w == 0 {
                return Err(Error::InvalidSpace(format!("bad edge ({i}, {j}, {w})")));
            }
            d[i][j] = d[i][j].min(w);
            d[j][i] = d[j][i].min(w);
        }
        floyd_warshall(&mut d);
        if d.iter().flatten().any(|&v| v == u64::MAX) {
            return Err(Error::InvalidSpace("edge list graph is disconnected".into()));
        }
        Self::new(labels, d)
    }

    /// Shortest-path closure of a complete graph with weights drawn from
    /// `1..=max_weight`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, max_weight: u64) -> Self {
        let mut d = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = rng.gen_range(1..=max_weight);
                d[i][j] = w;
                d[j][i] = w;
            }
        }
        floyd_warshall(&mut d);
        Self { labels: (0..n).map(|i| i.to_string()).collect(), dist: d }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn d(&self, i: usize, j: usize) -> u64 {
        self.dist[i][j]
    }

    pub fn diameter(&self) -> u64 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn floyd_warshall(d: &mut [Vec<u64>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == u64::MAX {
                continue;
            }
            for j in 0..n {
                if d[k][j] != u64::MAX && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
}
