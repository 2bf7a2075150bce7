use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::HyperError;
use crate::catalog::SpaceId;

/// `S^{q_1+1} ∨ S^{q_2+1}` is a homotopy retract of the space after
/// localizing away from the primes in `excluded_primes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractEntry {
    pub space: String,
    pub q1: u64,
    pub q2: u64,
    pub excluded_primes: BTreeSet<u64>,
    pub source: String,
}

impl RetractEntry {
    pub fn applies_at(&self, p: u64) -> bool {
        !self.excluded_primes.contains(&p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RetractLookup {
    Retract(RetractEntry),
    /// A retract of some wedge of two spheres is known to exist, with no
    /// explicit degrees.
    ExistenceOnly { space: String, note: String },
}

pub fn retract_catalog(space: &SpaceId) -> Result<RetractLookup, HyperError> {
    let entry = |q1, q2, excluded: &[u64], source: &str| {
        RetractLookup::Retract(RetractEntry {
            space: space.to_string(),
            q1,
            q2,
            excluded_primes: excluded.iter().copied().collect(),
            source: source.to_string(),
        })
    };
    Ok(match space {
        SpaceId::Conf { k, n } if *k >= 3 && *n >= 3 => {
            let q = *n as u64 - 2;
            entry(q, q, &[], "fibre of the Fadell-Neuwirth fibration")
        }
        SpaceId::SigmaCP2 => entry(2, 4, &[2], "ΣCP^2 ≃ S^3 ∨ S^5 away from 2"),
        SpaceId::SigmaHP2 => entry(4, 8, &[2, 3], "ΣHP^2 ≃ S^5 ∨ S^9 away from 2 and 3"),
        SpaceId::Manifold { .. } => RetractLookup::ExistenceOnly {
            space: space.to_string(),
            note: "loop space of a highly connected manifold of this rank contains a wedge of two spheres as a retract".into(),
        },
        SpaceId::PolyhedralProduct => RetractLookup::ExistenceOnly {
            space: space.to_string(),
            note: "non-product polyhedral products retract onto a wedge of two spheres".into(),
        },
        other => return Err(HyperError::NotInCatalog(other.to_string())),
    })
}
