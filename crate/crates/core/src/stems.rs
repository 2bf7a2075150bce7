//! Stable-stem torsion witnesses and e-invariant detector classes.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{adams_m_valuation, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StemError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{name} must be positive")]
    NotPositive { name: &'static str },
    #[error("stem index for p={p}, r={r} does not fit in 64 bits")]
    TooLarge { p: u64, r: u32 },
}

/// Which construction produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StemCase {
    /// Image of J at an odd prime: `t = p^{r-1}(p-1)`, `j = 4t - 1`.
    #[serde(rename = "odd-primary")]
    OddPrimary,
    /// Image of J at 2 with `r >= 3`: `t = 2^{r-3}`, `j = 4t - 1`.
    #[serde(rename = "two-primary-r>=3")]
    TwoPrimary,
    /// `Z/2 ⊆ π_1^S` and `Z/4 ⊆ π_34^S`, quoted from the literature.
    #[serde(rename = "small-two-primary")]
    SmallTwoPrimary,
}

impl fmt::Display for StemCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StemCase::OddPrimary => "odd-primary",
            StemCase::TwoPrimary => "two-primary-r>=3",
            StemCase::SmallTwoPrimary => "small-two-primary",
        })
    }
}

/// `Z/p^r` is a direct summand of `π_j^S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StemWitness {
    pub p: u64,
    pub r: u32,
    pub j: u64,
    pub case: StemCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
}

impl StemWitness {
    /// The summand lives in `π_{n+j}(S^n)` for every `n` at least this.
    pub fn stable_from(&self) -> u64 {
        self.j + 2
    }
}

/// A stem `j` in which `Z/p^r` is a direct summand.
pub fn stable_summand_stem(p: u64, r: u32) -> Result<StemWitness, StemError> {
    if !is_prime(p) {
        return Err(StemError::NotPrime(p));
    }
    if r == 0 {
        return Err(StemError::NotPositive { name: "r" });
    }
    let witness = match (p, r) {
        (2, 1) => StemWitness {
            p,
            r,
            j: 1,
            case: StemCase::SmallTwoPrimary,
            t: None,
        },
        (2, 2) => StemWitness {
            p,
            r,
            j: 34,
            case: StemCase::SmallTwoPrimary,
            t: None,
        },
        (2, r) => {
            let t = 1u64
                .checked_shl(r - 3)
                .filter(|t| *t <= u64::MAX / 8)
                .ok_or(StemError::TooLarge { p, r })?;
            StemWitness {
                p,
                r,
                j: 4 * t - 1,
                case: StemCase::TwoPrimary,
                t: Some(t),
            }
        }
        (p, r) => {
            let t = p
                .checked_pow(r - 1)
                .and_then(|x| x.checked_mul(p - 1))
                .filter(|t| *t <= u64::MAX / 8)
                .ok_or(StemError::TooLarge { p, r })?;
            let j = 4 * t - 1;
            debug_assert_eq!(j % 8, 7);
            StemWitness {
                p,
                r,
                j,
                case: StemCase::OddPrimary,
                t: Some(t),
            }
        }
    };
    if let Some(t) = witness.t {
        let nu = adams_m_valuation(p, 2 * t).expect("fuel arguments are in the quoted regime");
        assert_eq!(nu, r, "nu_p(m(2t)) disagrees with r for p={p}");
    }
    Ok(witness)
}

/// An element of Q/Z as a reduced fraction in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QmodZ {
    pub num: i64,
    pub den: i64,
}

impl QmodZ {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// Additive order in Q/Z.
    pub fn order(&self) -> i64 {
        self.den
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A class `f_{p,j} ∈ π_d(S^3)` detected by the e-invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetectorClass {
    pub p: u64,
    pub j: u64,
    /// `d`: the class lives in `π_d(S^3)`.
    pub domain_degree: u64,
    /// `e(f) = -1/p` in Q/Z.
    pub e_value: QmodZ,
    pub order: u64,
}

/// Gray's classes for odd `p` (`d = 2j(p-1)+2`, order p) and the 2-primary
/// classes of order 4 (`d = 8j+6`).
pub fn detector_class(p: u64, j: u64) -> Result<DetectorClass, StemError> {
    if !is_prime(p) {
        return Err(StemError::NotPrime(p));
    }
    if j == 0 {
        return Err(StemError::NotPositive { name: "j" });
    }
    Ok(if p == 2 {
        DetectorClass {
            p,
            j,
            domain_degree: 8 * j + 6,
            e_value: QmodZ::new(-1, 2),
            order: 4,
        }
    } else {
        DetectorClass {
            p,
            j,
            domain_degree: 2 * j * (p - 1) + 2,
            e_value: QmodZ::new(-1, p as i64),
            order: p,
        }
    })
}
