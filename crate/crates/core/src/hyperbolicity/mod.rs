//! Lower bounds on `Z/p^r` summands in homotopy groups: the Hilton-Milnor
//! census for wedges of spheres, the Adams-operation certificate for
//! suspensions, growth profiles, and the retract catalog.

mod census;
mod certificate;
mod growth;
mod retract;

pub use census::{wedge_summand_census, WedgeCensus};
pub use certificate::{
    certify_catalog_space, k_detection_certificate, select_c, verify_eigenvalue_condition,
    CertificationOutcome, HypothesisFailure, PHypCertificate,
};
pub use growth::{growth_profile, lower_bound_constant, GrowthPoint, GrowthProfile};
pub use retract::{retract_catalog, RetractEntry, RetractLookup};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freelie::{
    hall_basis, multidegree_census, multidegree_census_by_formula, GeneratorSpec,
};
use crate::ktheory::KTheoryError;
use crate::numtheory::witt_u64;
use crate::stems::StemError;

/// Largest weight a census or certificate will tabulate. `W_2(60)` still
/// fits comfortably in a `u64`.
pub const MAX_WEIGHT: u64 = 60;

/// Weights up to this are also enumerated through an explicit Hall basis
/// and compared with the closed-form census.
pub const ENUMERATION_CROSSCHECK_WEIGHT: u64 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("{name} must be positive")]
    NotPositive { name: &'static str },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p must be odd, got {0}")]
    EvenPrime(u64),
    #[error("k_max = {0} exceeds the supported maximum {MAX_WEIGHT}")]
    WeightTooLarge(u64),
    #[error("map is over F_{map}, certificate asked for p = {requested}")]
    PrimeMismatch { map: u64, requested: u64 },
    #[error("{0} is not in the retract catalog")]
    NotInCatalog(String),
    #[error(transparent)]
    Stem(#[from] StemError),
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
}

/// One weight of a census: how many `Z/p^r` summands land in each degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRow {
    pub k: u64,
    /// `W_2(k)`, the total over all degrees of this row.
    pub witt: u64,
    /// homotopy degree -> number of summands
    pub degrees: BTreeMap<u64, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(u64, u64)>,
}

impl SummandRow {
    pub fn total(&self) -> u64 {
        self.degrees.values().sum()
    }
}

/// Anything that yields summand rows and a linear bound `m >= a k + b`.
pub trait SummandCensus {
    fn rows(&self) -> &[SummandRow];
    fn a(&self) -> u64;
    fn b(&self) -> u64;
}

/// Degree census of weight-k basic products on generators of degrees
/// `(q1, q2)`, shifted by `shift`. Small weights are enumerated as well
/// and must agree.
fn shifted_weight_census(q1: u64, q2: u64, k: u64, shift: u64) -> SummandRow {
    let spec = GeneratorSpec::new(vec![q1, q2]).expect("degrees are positive");
    let formula: BTreeMap<u64, u64> = multidegree_census_by_formula(&spec, k as usize)
        .into_iter()
        .map(|(d, c): (u64, BigUint)| (d, c.to_u64().expect("count fits in u64")))
        .collect();
    if k <= ENUMERATION_CROSSCHECK_WEIGHT {
        let basis = hall_basis(&spec, k as usize);
        let enumerated = multidegree_census(basis.weight(k as usize), &spec);
        assert_eq!(formula, enumerated, "census formula disagrees with enumeration at k={k}");
    }
    let witt = witt_u64(2, k).expect("W_2(k) fits in u64");
    assert_eq!(formula.values().sum::<u64>(), witt);
    let degrees = formula.into_iter().map(|(d, c)| (d + shift, c)).collect();
    SummandRow {
        k,
        witt,
        degrees,
        window: None,
    }
}

fn check_k_max(k_max: u64) -> Result<(), HyperError> {
    if k_max == 0 {
        return Err(HyperError::NotPositive { name: "k_max" });
    }
    if k_max > MAX_WEIGHT {
        return Err(HyperError::WeightTooLarge(k_max));
    }
    Ok(())
}
