use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::SummandCensus;
use crate::numtheory::{at_least_power_of_two, ceil_div};

/// `t_m`: the number of summands found in degrees `<= m`, with the bounds
/// it is checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub m: u64,
    pub t_m: u64,
    /// `floor(m/a) - s_0`
    pub bound_exponent: i64,
    pub meets_bound: bool,
    /// `W_2(k)` for `k = floor((m - b)/a)` when that row is in the census;
    /// `t_m` is always at least this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witt_guarantee: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub a: u64,
    pub b: u64,
    /// `ceil((b + a)/a)`
    pub s0: i64,
    pub points: Vec<GrowthPoint>,
}

impl GrowthProfile {
    /// `t_m`; 0 below the first populated degree, the full total above
    /// the last.
    pub fn t_at(&self, m: u64) -> u64 {
        let (Some(first), Some(last)) = (self.points.first(), self.points.last()) else {
            return 0;
        };
        if m < first.m {
            return 0;
        }
        if m >= last.m {
            return last.t_m;
        }
        self.points[(m - first.m) as usize].t_m
    }

    pub fn all_meet_bound(&self) -> bool {
        self.points.iter().all(|pt| pt.meets_bound)
    }

    pub fn meets_witt_guarantee(&self) -> bool {
        self.points
            .iter()
            .all(|pt| pt.witt_guarantee.is_none_or(|w| pt.t_m >= w))
    }

    /// `t_m >= 2^{floor(rate * m)}`.
    pub fn exceeds_rate(&self, m: u64, rate: Ratio<u64>) -> bool {
        let exponent = (rate * m).to_integer();
        at_least_power_of_two(&BigUint::from(self.t_at(m)), exponent as i64)
    }

    pub fn first_degree(&self) -> Option<u64> {
        self.points.first().map(|pt| pt.m)
    }

    pub fn last_degree(&self) -> Option<u64> {
        self.points.last().map(|pt| pt.m)
    }
}

/// Cumulative summand counts over the populated range of degrees, and
/// whether each clears `2^{floor(m/a) - s_0}`.
pub fn growth_profile(census: &impl SummandCensus) -> GrowthProfile {
    let (a, b) = (census.a(), census.b());
    assert!(a > 0, "slope a must be positive");
    let mut per_degree: BTreeMap<u64, u64> = BTreeMap::new();
    let mut witt_by_k: BTreeMap<u64, u64> = BTreeMap::new();
    for row in census.rows() {
        witt_by_k.insert(row.k, row.witt);
        for (&m, &c) in &row.degrees {
            let slot = per_degree.entry(m).or_insert(0);
            *slot = slot.checked_add(c).expect("t_m overflows u64");
        }
    }
    let s0 = ceil_div((b + a) as i64, a as i64);
    let (Some(&lo), Some(&hi)) = (per_degree.keys().next(), per_degree.keys().next_back()) else {
        return GrowthProfile { a, b, s0, points: Vec::new() };
    };
    let mut running = 0u64;
    let points = (lo..=hi)
        .map(|m| {
            running += per_degree.get(&m).copied().unwrap_or(0);
            let bound_exponent = (m / a) as i64 - s0;
            let witt_guarantee = m
                .checked_sub(b)
                .and_then(|x| witt_by_k.get(&(x / a)).copied());
            GrowthPoint {
                m,
                t_m: running,
                bound_exponent,
                meets_bound: at_least_power_of_two(&BigUint::from(running), bound_exponent),
                witt_guarantee,
            }
        })
        .collect();
    GrowthProfile { a, b, s0, points }
}

/// Coefficient of `ln 2` in the lower bound for `liminf ln(t_m)/m`.
pub fn lower_bound_constant(q1: u64, q2: u64) -> Ratio<u64> {
    assert!(q1 > 0 && q2 > 0, "degrees must be positive");
    Ratio::new(1, q1.max(q2))
}
