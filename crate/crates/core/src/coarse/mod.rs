//! r-components, asymptotic dimension 0 and sparseness at scale, coarse
//! equivalence profiles, and local (L-)finiteness probes.

mod components;
mod probes;
mod profile;

pub use components::{
    asdim0_evidence, r_components, revalidate_witness, sparse_evidence, Block, PathWitness, RComponentPartition,
};
pub use probes::{local_finiteness_probe, local_l_finiteness_probe};
pub use profile::{coarse_profile, profile_growth, GrowthFlag, ProfileReport};

use serde::Serialize;

use crate::semigroup::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    AsDim0,
    Sparse,
    LocallyFinite,
    LocallyLFinite,
    CoarselyTrivial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Path(PathWitness),
    GrowingClass { idempotent: Element, cumulative_sizes: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Established,
    RefutedAtScale { scale: u64, witness: Witness },
    /// `consistent` says whether the evidence points towards the property.
    EvidenceAtScale { scale: u64, consistent: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoarseVerdict {
    pub property: Property,
    pub status: Status,
    pub statistics: serde_json::Value,
}

impl CoarseVerdict {
    pub fn is_established(&self) -> bool {
        self.status == Status::Established
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.status, Status::RefutedAtScale { .. })
    }

    /// Established, or evidence consistent with the property.
    pub fn is_positive(&self) -> bool {
        matches!(self.status, Status::Established | Status::EvidenceAtScale { consistent: true, .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::RefutedAtScale { witness, .. } => Some(witness),
            _ => None,
        }
    }
}
