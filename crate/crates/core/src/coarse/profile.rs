use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Dist, MetricTable};

/// Empirical control functions between two metrics on the same elements:
/// `rho_minus(r) = min { d2 : d >= r }`, `rho_plus(r) = max { d2 : d <= r }`
/// over observed values `r` of `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub pairs_checked: usize,
    pub rho_minus: BTreeMap<u64, u64>,
    pub rho_plus: BTreeMap<u64, u64>,
    /// Pairs with `rho_minus(d) <= d2 <= rho_plus(d)` failing.
    pub violations: usize,
}

pub fn coarse_profile(d: &MetricTable, d2: &MetricTable) -> Result<ProfileReport> {
    if d.elements() != d2.elements() {
        return Err(Error::Alignment("the two metric tables cover different elements".into()));
    }
    let mut obs: Vec<(u64, u64)> = Vec::new();
    for c in d.classes() {
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                match d2.distance(&c.members[i], &c.members[j]) {
                    Some(Dist::Finite(v)) => obs.push((c.d(i, j), v)),
                    _ => {
                        return Err(Error::Alignment(format!(
                            "{} and {} share a class in one table only",
                            c.members[i], c.members[j]
                        )))
                    }
                }
            }
        }
    }
    let values: Vec<u64> = {
        let mut v: Vec<u64> = obs.iter().map(|o| o.0).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut rho_minus = BTreeMap::new();
    let mut rho_plus = BTreeMap::new();
    for &r in &values {
        let lo = obs.iter().filter(|o| o.0 >= r).map(|o| o.1).min().unwrap_or(0);
        let hi = obs.iter().filter(|o| o.0 <= r).map(|o| o.1).max().unwrap_or(0);
        rho_minus.insert(r, lo);
        rho_plus.insert(r, hi);
    }
    let violations = obs.iter().filter(|(a, b)| !(rho_minus[a] <= *b && *b <= rho_plus[a])).count();
    Ok(ProfileReport { pairs_checked: obs.len(), rho_minus, rho_plus, violations })
}

/// `rho_plus(r)` followed across a sequence of growing scopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthFlag {
    pub scale: u64,
    pub values: Vec<(u64, Option<u64>)>,
    /// Strictly increasing across every scope: no bound at this scale.
    pub unbounded: bool,
}

pub fn profile_growth(profiles: &[(u64, ProfileReport)], r: u64) -> GrowthFlag {
    let values: Vec<(u64, Option<u64>)> =
        profiles.iter().map(|(depth, p)| (*depth, p.rho_plus.get(&r).copied())).collect();
    let unbounded = values.len() >= 2
        && values.windows(2).all(|w| matches!((w[0].1, w[1].1), (Some(a), Some(b)) if b > a));
    GrowthFlag { scale: r, values, unbounded }
}
