use std::collections::BTreeMap;

use serde_json::json;

use super::{CoarseVerdict, Property, Status, Witness};
use crate::error::Result;
use crate::semigroup::{generate_closure, Element, GenerationStatus, InverseSemigroup, SemigroupOracle};

/// Closes each generator set up to `cap`. All closures complete is evidence
/// for local finiteness (established when the ambient semigroup is finite);
/// a truncated closure reports its growth, never a refutation.
pub fn local_finiteness_probe(oracle: &SemigroupOracle, sets: &[Vec<Element>], cap: usize) -> Result<CoarseVerdict> {
    let mut stats = Vec::new();
    let mut all_complete = true;
    for gens in sets {
        let s = generate_closure(oracle, gens, cap)?;
        all_complete &= s.is_complete();
        stats.push(json!({
            "generators": gens,
            "status": s.status(),
            "size": s.len(),
            "layer_sizes": s.layer_sizes(),
        }));
    }
    let status = if all_complete && oracle.is_finite() {
        Status::Established
    } else {
        Status::EvidenceAtScale { scale: cap as u64, consistent: all_complete }
    };
    Ok(CoarseVerdict { property: Property::LocallyFinite, status, statistics: json!(stats) })
}

/// Tracks every L-class of each closure across word-length layers. A class
/// first met in the first third of the complete layers that still gains
/// members in the last third is a growing class and refutes at scale.
pub fn local_l_finiteness_probe(oracle: &SemigroupOracle, sets: &[Vec<Element>], cap: usize) -> Result<CoarseVerdict> {
    let mut stats = Vec::new();
    let mut witness: Option<(u64, Element, Vec<usize>)> = None;
    let mut all_complete = true;
    for gens in sets {
        let s = generate_closure(oracle, gens, cap)?;
        all_complete &= s.is_complete();
        let layers = s.layer_sizes().len();
        let mut per_class: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
        for (i, e) in s.elements().iter().enumerate() {
            let k = s.word_length(i) as usize;
            if k == 0 || k > layers {
                continue;
            }
            per_class.entry(oracle.source_idempotent(e)).or_insert_with(|| vec![0; layers])[k - 1] += 1;
        }
        let mut growing = Vec::new();
        for (idem, counts) in &per_class {
            let first = counts.iter().position(|&c| c > 0).unwrap_or(layers);
            let late = counts.iter().skip(2 * layers / 3).any(|&c| c > 0);
            if s.status() != GenerationStatus::Complete && 3 * (first + 1) <= layers && late {
                growing.push(idem.clone());
            }
        }
        let largest = per_class.values().map(|c| c.iter().sum::<usize>()).max().unwrap_or(0);
        stats.push(json!({
            "generators": gens,
            "status": s.status(),
            "layers": layers,
            "classes": per_class.len(),
            "largest_class": largest,
            "growing_classes": growing.len(),
        }));
        if witness.is_none() {
            if let Some(idem) = growing.first() {
                let cumulative = per_class[idem]
                    .iter()
                    .scan(0, |acc, &c| {
                        *acc += c;
                        Some(*acc)
                    })
                    .collect();
                witness = Some((layers as u64, idem.clone(), cumulative));
            }
        }
    }
    let status = match witness {
        Some((scale, idempotent, cumulative_sizes)) => {
            Status::RefutedAtScale { scale, witness: Witness::GrowingClass { idempotent, cumulative_sizes } }
        }
        None if all_complete && oracle.is_finite() => Status::Established,
        None => Status::EvidenceAtScale { scale: cap as u64, consistent: true },
    };
    Ok(CoarseVerdict { property: Property::LocallyLFinite, status, statistics: json!(stats) })
}
