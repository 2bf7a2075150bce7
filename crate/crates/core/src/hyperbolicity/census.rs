use serde::{Deserialize, Serialize};

use super::{check_k_max, shifted_weight_census, HyperError, SummandCensus, SummandRow};
use crate::stems::{stable_summand_stem, StemWitness};

/// `Z/p^r` summands of `π_*(S^{q_1+1} ∨ S^{q_2+1})` found by composing a
/// stable class with the Hilton-Milnor factors of weight k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeCensus {
    pub p: u64,
    pub r: u32,
    pub q1: u64,
    pub q2: u64,
    pub witness: StemWitness,
    /// First weight whose sphere `S^{N+1}` is in the stable range of `j`.
    pub k0: u64,
    pub k_max: u64,
    pub rows: Vec<SummandRow>,
    pub oracles_checked: Vec<String>,
}

impl WedgeCensus {
    pub fn j(&self) -> u64 {
        self.witness.j
    }

    /// Degree of the summand coming from a basic product of degree `n`.
    pub fn degree_for(&self, n: u64) -> u64 {
        n + self.witness.j + 1
    }

    pub fn row(&self, k: u64) -> Option<&SummandRow> {
        self.rows.iter().find(|row| row.k == k)
    }
}

impl SummandCensus for WedgeCensus {
    fn rows(&self) -> &[SummandRow] {
        &self.rows
    }

    /// Every summand of weight k sits in degree at most `q_2 k + 1 + j`.
    fn a(&self) -> u64 {
        self.q2
    }

    fn b(&self) -> u64 {
        1 + self.witness.j
    }
}

/// Rows for weights `k_0..=k_max`; weights below `k_0` contribute nothing.
pub fn wedge_summand_census(q1: u64, q2: u64, p: u64, r: u32, k_max: u64) -> Result<WedgeCensus, HyperError> {
    if q1 == 0 {
        return Err(HyperError::NotPositive { name: "q1" });
    }
    if q2 == 0 {
        return Err(HyperError::NotPositive { name: "q2" });
    }
    check_k_max(k_max)?;
    let (q1, q2) = (q1.min(q2), q1.max(q2));
    let witness = stable_summand_stem(p, r)?;
    let j = witness.j;
    // smallest k with k q_1 >= j + 1, so S^{N+1} with N >= k q_1 is stable for j
    let k0 = (j + 1).div_ceil(q1).max(1);
    let rows: Vec<SummandRow> = (k0..=k_max)
        .map(|k| shifted_weight_census(q1, q2, k, j + 1))
        .collect();
    for row in &rows {
        let lo = *row.degrees.keys().next().unwrap();
        let hi = *row.degrees.keys().next_back().unwrap();
        assert!(row.k * q1 + j < lo && hi <= row.k * q2 + j + 1);
    }
    let mut oracles_checked = vec![
        "witt-total-per-row".to_string(),
        "degree-window".to_string(),
        "adams-m-valuation".to_string(),
    ];
    if rows.iter().any(|row| row.k <= super::ENUMERATION_CROSSCHECK_WEIGHT) {
        oracles_checked.push(format!(
            "hall-enumeration(k<={})",
            super::ENUMERATION_CROSSCHECK_WEIGHT
        ));
    }
    Ok(WedgeCensus {
        p,
        r,
        q1,
        q2,
        witness,
        k0,
        k_max,
        rows,
        oracles_checked,
    })
}
