use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;
use serde_json::{json, Value};

use super::matching::{build_matchings, Colorer, MatchingFamily};
use super::space::FiniteMetricSpace;
use crate::error::{Error, Result};
use crate::metric::{weighted_word_metric, Dist, WeightedGenerators};
use crate::semigroup::{Element, PartialBijection, SemigroupOracle};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub level: u64,
    pub matching: usize,
    pub weight: u64,
}

/// `X` realised as the L-class of `id_x` in `I_{|X|}`, `y ↦ γ_{y,x}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub basepoint: usize,
    pub labels: Vec<String>,
    pub family: MatchingFamily,
    images: Vec<PartialBijection>,
    // adj[u] = (v, weight, involution index)
    adj: Vec<Vec<(usize, u64, usize)>>,
    dist: Vec<u64>,
}

pub fn embed_space(x: &FiniteMetricSpace, basepoint: usize, colorer: Colorer) -> Result<Embedding> {
    let n = x.len();
    if basepoint >= n {
        return Err(Error::InvalidSpace(format!("basepoint {basepoint} out of range")));
    }
    let family = build_matchings(x, colorer);
    let mut adj = vec![Vec::new(); n];
    for (k, inv) in family.involutions.iter().enumerate() {
        for &(s, t) in inv.map.pairs() {
            if s != t {
                adj[s as usize - 1].push((t as usize - 1, inv.weight, k));
            }
        }
    }
    let ground = n as u32;
    let images = (0..n)
        .map(|y| PartialBijection::gamma(ground, y as u32 + 1, basepoint as u32 + 1))
        .collect::<Result<Vec<_>>>()?;
    let mut e = Embedding { basepoint, labels: x.labels().to_vec(), family, images, adj, dist: vec![0; n * n] };
    for y in 0..n {
        let (d, _) = e.search(y);
        for z in 0..n {
            e.dist[y * n + z] = d[z].ok_or_else(|| Error::InvalidSpace("embedded graph is disconnected".into()))?;
        }
    }
    Ok(e)
}

impl Embedding {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, y: usize) -> &PartialBijection {
        &self.images[y]
    }

    pub fn d(&self, y: usize, z: usize) -> u64 {
        self.dist[y * self.len() + z]
    }

    /// Involutions with their level weights, then `id_y` with weight 1.
    pub fn generators(&self) -> Vec<(PartialBijection, u64)> {
        let n = self.len() as u32;
        let mut out: Vec<(PartialBijection, u64)> =
            self.family.involutions.iter().map(|inv| (inv.map.clone(), inv.weight)).collect();
        for y in 1..=n {
            out.push((PartialBijection::identity_on(n, [y]).expect("point in range"), 1));
        }
        out
    }

    pub fn generators_json(&self) -> Value {
        let mut rows: Vec<Value> = self
            .family
            .involutions
            .iter()
            .map(|inv| json!({"level": inv.level, "index": inv.index, "weight": inv.weight, "map": Element::map(inv.map.clone()).to_json()}))
            .collect();
        let n = self.len() as u32;
        for y in 1..=n {
            let id = PartialBijection::identity_on(n, [y]).expect("point in range");
            rows.push(json!({"idempotent": y, "weight": 1, "map": Element::map(id).to_json()}));
        }
        json!({"ground": n, "basepoint": self.basepoint + 1, "generators": rows})
    }

    fn search(&self, src: usize) -> (Vec<Option<u64>>, Vec<Option<(usize, usize)>>) {
        let n = self.len();
        let mut dist = vec![None; n];
        let mut pred = vec![None; n];
        dist[src] = Some(0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &(v, w, k) in &self.adj[u] {
                let nd = d + w;
                if dist[v].is_none_or(|old| nd < old) {
                    dist[v] = Some(nd);
                    pred[v] = Some((u, k));
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        (dist, pred)
    }

    /// A shortest path of involution steps from `y` to `z`.
    pub fn path(&self, y: usize, z: usize) -> Vec<Step> {
        let (_, pred) = self.search(y);
        let mut steps = Vec::new();
        let mut cur = z;
        while let Some((p, k)) = pred[cur] {
            let inv = &self.family.involutions[k];
            steps.push(Step { from: p, to: cur, level: inv.level, matching: inv.index, weight: inv.weight });
            cur = p;
        }
        steps.reverse();
        steps
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph embedding {\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  {i} [label=\"{}\"];\n", crate::metric::dot_escape(l)));
        }
        for inv in &self.family.involutions {
            for &(s, t) in inv.map.pairs() {
                if s < t {
                    out.push_str(&format!(
                        "  {} -- {} [label=\"{}\", colorscheme=set312, color={}];\n",
                        s - 1,
                        t - 1,
                        inv.weight,
                        inv.index % 12 + 1
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn certificate(&self, y: usize, z: usize, dx: u64) -> Vec<String> {
        let mut lines: Vec<String> = self
            .path(y, z)
            .iter()
            .map(|s| {
                format!(
                    "{} -> {} via level {} matching {} (weight {})",
                    self.labels[s.from], self.labels[s.to], s.level, s.matching, s.weight
                )
            })
            .collect();
        let direct = self.adj[y].iter().find(|&&(v, w, _)| v == z && w == dx);
        lines.push(match direct {
            Some(&(_, _, k)) => format!(
                "direct edge at level {} matching {}",
                self.family.involutions[k].level, self.family.involutions[k].index
            ),
            None => format!("no direct edge of weight {dx}"),
        });
        lines
    }
}

/// Empirical distortion of `y ↦ γ_{y,x}`, grouped by `d_X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistortionReport {
    pub pairs: usize,
    pub isometric_pairs: usize,
    /// `d_X = r ↦ min d_E` over such pairs.
    pub rho_minus: BTreeMap<u64, u64>,
    /// `d_X = r ↦ max d_E` over such pairs.
    pub rho_plus: BTreeMap<u64, u64>,
}

/// Checks `r <= d_E <= r + 1` for every pair with `d_X = r`; the first
/// violation is returned with both path certificates.
pub fn verify_distortion(x: &FiniteMetricSpace, e: &Embedding) -> Result<DistortionReport> {
    let n = x.len();
    if e.len() != n {
        return Err(Error::Alignment(format!("embedding has {} points, space has {n}", e.len())));
    }
    let mut report =
        DistortionReport { pairs: 0, isometric_pairs: 0, rho_minus: BTreeMap::new(), rho_plus: BTreeMap::new() };
    for y in 0..n {
        for z in 0..n {
            let (dx, de) = (x.d(y, z), e.d(y, z));
            if de < dx || de > dx + 1 {
                return Err(Error::DistortionViolation {
                    y: x.labels()[y].clone(),
                    z: x.labels()[z].clone(),
                    dx,
                    de,
                    certificate: e.certificate(y, z, dx),
                });
            }
            report.pairs += 1;
            if de == dx {
                report.isometric_pairs += 1;
            }
            let lo = report.rho_minus.entry(dx).or_insert(de);
            *lo = (*lo).min(de);
            let hi = report.rho_plus.entry(dx).or_insert(de);
            *hi = (*hi).max(de);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub pairs: usize,
    pub mismatches: Vec<(usize, usize, u64, Option<u64>)>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes the embedded distances as the weighted word metric of the
/// generated subsemigroup of `I_n` on the L-class of `id_x`.
pub fn cross_check(e: &Embedding) -> Result<CrossCheck> {
    let n = e.len() as u32;
    let gens = e.generators();
    let oracle = SemigroupOracle::generated(n, gens.iter().map(|(g, _)| g.clone()).collect());
    let weighted = WeightedGenerators::new(&oracle, gens.into_iter().map(|(g, w)| (Element::map(g), w)))?;
    let base = Element::map(PartialBijection::identity_on(n, [e.basepoint as u32 + 1])?);
    let table = weighted_word_metric(&oracle, &weighted, &[base], None)?;
    let mut out = CrossCheck { pairs: 0, mismatches: Vec::new() };
    for y in 0..e.len() {
        for z in 0..e.len() {
            let a = Element::map(e.image(y).clone());
            let b = Element::map(e.image(z).clone());
            let got = table.distance(&a, &b).and_then(Dist::finite);
            out.pairs += 1;
            if got != Some(e.d(y, z)) {
                out.mismatches.push((y, z, e.d(y, z), got));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_space_is_isometric() {
        let x = FiniteMetricSpace::from_csv("0,1,2\n1,0,1\n2,1,0\n").unwrap();
        let e = embed_space(&x, 0, Colorer::Greedy).unwrap();
        let r = verify_distortion(&x, &e).unwrap();
        assert_eq!(r.isometric_pairs, r.pairs);
        assert!(cross_check(&e).unwrap().passed());
        assert_eq!(e.image(2).pairs(), &[(1, 3)]);
    }

    #[test]
    fn random_spaces_embed_isometrically() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for colorer in [Colorer::Greedy, Colorer::MisraGries] {
            for _ in 0..5 {
                let x = FiniteMetricSpace::random(&mut rng, 12, 20);
                let e = embed_space(&x, 3, colorer).unwrap();
                let r = verify_distortion(&x, &e).unwrap();
                assert_eq!(r.isometric_pairs, r.pairs);
                assert!(cross_check(&e).unwrap().passed());
            }
        }
    }

    #[test]
    fn tampered_embedding_reports_certificate() {
        let x = FiniteMetricSpace::from_csv("0,1,2\n1,0,1\n2,1,0\n").unwrap();
        let y = FiniteMetricSpace::from_csv("0,1,5\n1,0,4\n5,4,0\n").unwrap();
        let e = embed_space(&x, 0, Colorer::Greedy).unwrap();
        match verify_distortion(&y, &e) {
            Err(Error::DistortionViolation { dx, de, certificate, .. }) => {
                assert!(de < dx);
                assert!(!certificate.is_empty());
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }
}
