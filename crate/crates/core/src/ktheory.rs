//! Torsion-free K-theory of catalog spaces, recorded as the exponents `i`
//! of the Adams eigenvalues `ℓ^i`.
//!
//! Rationally the Chern character splits `K̃^0(X) ⊗ Q` into the even
//! cohomology, with `ψ^ℓ` acting on `H^{2i}` by `ℓ^i`, and
//! `K̃^0(ΣX) ⊗ Q` into the suspended odd cohomology, a class of degree
//! `2i - 1` landing in degree `2i`. Every comparison between eigenvalues
//! then becomes a comparison of integer exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::SpaceId;
use crate::linalg::rank_reduced_mod_p;
use crate::numtheory::{is_prime, poincare_polynomial, NumTheoryError, PoincarePolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTheoryError {
    #[error("Poincaré polynomial must have constant term 1, got {0}")]
    NotConnected(u64),
    #[error("connectivity {claimed} contradicts a class in degree {degree}")]
    Connectivity { claimed: u32, degree: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed map: {0}")]
    MalformedMap(String),
    #[error("{space} has no built-in map from a wedge of two spheres")]
    NoBuiltinMap { space: String },
    #[error(transparent)]
    Cohomology(#[from] NumTheoryError),
}

/// Multisets of Adams exponents on `K̃^0(X) ⊗ Q` and `K̃^0(ΣX) ⊗ Q`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct KModel {
    /// exponent -> multiplicity
    pub even_exponents: BTreeMap<u32, u32>,
    pub susp_exponents: BTreeMap<u32, u32>,
    /// `X` is `(connectivity - 1)`-connected.
    pub connectivity: u32,
}

impl KModel {
    pub fn max_even(&self) -> u32 {
        self.even_exponents.keys().next_back().copied().unwrap_or(0)
    }

    pub fn max_susp(&self) -> u32 {
        self.susp_exponents.keys().next_back().copied().unwrap_or(0)
    }

    /// Ranks of the even and odd parts of `K̃^TF_*(X)`.
    pub fn graded_rank(&self) -> (u64, u64) {
        let count = |m: &BTreeMap<u32, u32>| m.values().map(|&c| c as u64).sum::<u64>();
        (count(&self.even_exponents), count(&self.susp_exponents))
    }
}

/// Bucket the Betti numbers of `X` by parity into Adams exponents.
pub fn kmodel_from_poincare(poly: &PoincarePolynomial, connectivity: u32) -> Result<KModel, KTheoryError> {
    if poly.coefficient(0) != 1 {
        return Err(KTheoryError::NotConnected(poly.coefficient(0)));
    }
    let mut model = KModel {
        connectivity,
        ..KModel::default()
    };
    for (degree, &c) in poly.coefficients().iter().enumerate().skip(1) {
        if c == 0 {
            continue;
        }
        if degree < connectivity as usize {
            return Err(KTheoryError::Connectivity {
                claimed: connectivity,
                degree,
            });
        }
        let bucket = if degree % 2 == 0 {
            model.even_exponents.entry(degree as u32 / 2)
        } else {
            model.susp_exponents.entry((degree as u32).div_ceil(2))
        };
        *bucket.or_insert(0) += c as u32;
    }
    Ok(model)
}

/// Lowest positive degree carrying a class (the connectivity `r`).
pub fn connectivity_of(poly: &PoincarePolynomial) -> u32 {
    (1..=poly.top_degree())
        .find(|&d| poly.coefficient(d) != 0)
        .unwrap_or(poly.top_degree() + 1) as u32
}

/// Model of a catalog space.
pub fn catalog_kmodel(space: &SpaceId) -> Result<KModel, KTheoryError> {
    let poly = poincare_polynomial(space)?;
    kmodel_from_poincare(&poly, connectivity_of(&poly))
}

/// Exponent of `λ_ℓ = max(λ_ℓ^X, λ_ℓ^{ΣX})`; an empty spectrum counts as
/// exponent 0.
pub fn lambda_exponent(model: &KModel) -> u32 {
    model.max_even().max(model.max_susp())
}

/// Exponent of the largest eigenvalue of `ψ^ℓ ⊗ Q` on
/// `K̃^0(Σ^{suspensions} J_s(X)) ⊗ Q`.
pub fn james_suspension_lambda_exponent(model: &KModel, s: u32, suspensions: u32) -> u64 {
    assert!(s >= 1, "James filtration index must be positive");
    let i = (suspensions / 2) as u64;
    let even = model.max_even() as u64;
    if suspensions.is_multiple_of(2) {
        i + s as u64 * even
    } else {
        i + model.max_susp() as u64 + (s as u64 - 1) * even
    }
}

/// Even and odd ranks of the weight-k tensor power of a `Z/2`-graded
/// module with ranks `(even, odd)`.
pub fn tensor_weight_ranks(even: u64, odd: u64, k: u32) -> (BigUint, BigUint) {
    // (e + o x)^k with x^2 = 1: even part sums the even powers of x
    let plus: BigUint = Pow::pow(&BigUint::from(even + odd), k);
    let minus_base = even as i128 - odd as i128;
    let minus_abs: BigUint = Pow::pow(&BigUint::from(minus_base.unsigned_abs()), k);
    let minus_negative = minus_base < 0 && k % 2 == 1;
    let two = BigUint::from(2u32);
    if minus_negative {
        ((&plus - &minus_abs) / &two, (&plus + &minus_abs) / &two)
    } else {
        ((&plus + &minus_abs) / &two, (&plus - &minus_abs) / &two)
    }
}

/// Ranks of the weight-k summand of `K^TF_*(ΩΣX) ≅ T(K̃^TF_*(X))`.
pub fn omega_sigma_weight_ranks(model: &KModel, k: u32) -> (BigUint, BigUint) {
    let (e, o) = model.graded_rank();
    if k == 0 {
        return (BigUint::from(1u32), BigUint::zero());
    }
    tensor_weight_ranks(e, o, k)
}

/// What the two-row matrix of a [`ModPMap`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputMode {
    #[serde(rename = "k-theory")]
    KTheory,
    /// Mod-p cohomology, valid when the Atiyah-Hirzebruch spectral
    /// sequence for `K^*(ΣX)` collapses at `E^2`.
    #[serde(rename = "ordinary-cohomology-AHSS-collapse")]
    Cohomology,
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputMode::KTheory => "k-theory",
            InputMode::Cohomology => "ordinary-cohomology-AHSS-collapse",
        })
    }
}

/// `(μ_1 ∨ μ_2)^*` on mod-p K-theory (or cohomology): two rows, one per
/// sphere of `S^{q_1+1} ∨ S^{q_2+1}`, columns a basis of `K̃^*(ΣX) ⊗ Z/p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPMap {
    p: u64,
    q1: u64,
    q2: u64,
    rows: [Vec<u64>; 2],
    mode: InputMode,
}

impl ModPMap {
    /// Rows are reduced mod `p`; `q_1 <= q_2` is enforced by swapping rows.
    pub fn new(p: u64, q1: u64, q2: u64, rows: Vec<Vec<i64>>, mode: InputMode) -> Result<Self, KTheoryError> {
        if !is_prime(p) {
            return Err(KTheoryError::NotPrime(p));
        }
        if q1 == 0 || q2 == 0 {
            return Err(KTheoryError::MalformedMap("q1 and q2 must be positive".into()));
        }
        let [r1, r2]: [Vec<i64>; 2] = rows.try_into().map_err(|rows: Vec<Vec<i64>>| {
            KTheoryError::MalformedMap(format!("expected 2 rows, got {}", rows.len()))
        })?;
        if r1.len() != r2.len() {
            return Err(KTheoryError::MalformedMap(format!(
                "rows have lengths {} and {}",
                r1.len(),
                r2.len()
            )));
        }
        let reduce = |r: Vec<i64>| -> Vec<u64> {
            r.into_iter()
                .map(|x| (x as i128).rem_euclid(p as i128) as u64)
                .collect()
        };
        let (q1, q2, rows) = if q1 <= q2 {
            (q1, q2, [reduce(r1), reduce(r2)])
        } else {
            (q2, q1, [reduce(r2), reduce(r1)])
        };
        Ok(Self { p, q1, q2, rows, mode })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q_min(&self) -> u64 {
        self.q1
    }

    pub fn q_max(&self) -> u64 {
        self.q2
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    pub fn rows(&self) -> &[Vec<u64>; 2] {
        &self.rows
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.rows.to_vec();
        rank_reduced_mod_p(&mut m, self.p)
    }
}

/// Surjectivity onto `Z/p ⊕ Z/p`, i.e. rank 2 over F_p. Dually, the map is
/// injective on mod-p K-homology.
pub fn k_surjectivity_check(map: &ModPMap) -> bool {
    map.rank() == 2
}

/// Basis of `H̃^*(ΣX)` as the list of degrees of its elements, ascending.
fn suspended_basis_degrees(poly: &PoincarePolynomial) -> Vec<u64> {
    let mut out = Vec::new();
    for (d, &c) in poly.coefficients().iter().enumerate().skip(1) {
        for _ in 0..c {
            out.push(d as u64 + 1);
        }
    }
    out
}

/// The sphere dimensions `(q_1, q_2)` a catalog space's built-in map uses.
pub fn builtin_wedge_degrees(space: &SpaceId) -> Option<(u64, u64)> {
    use SpaceId::*;
    match space {
        // through CP^2 -> X, and ΣCP^2 ≃ S^3 ∨ S^5 away from 2
        ComplexProjective(n) if *n >= 2 => Some((2, 4)),
        Grassmannian { k: _, n } if *n >= 3 => Some((2, 4)),
        Milnor { m, n } if *m >= 2 && *n >= 3 => Some((2, 4)),
        // through Σ^2 CP^2 -> Σ^2 CP^{n-1} -> ΣU(n)
        Unitary(n) if *n >= 3 => Some((3, 5)),
        Wedge(dims) if dims.len() >= 2 => {
            let mut d = dims.clone();
            d.sort_unstable();
            Some((d[0] as u64, d[1] as u64))
        }
        _ => None,
    }
}

/// The map `S^{q_1+1} ∨ S^{q_2+1} → ΣX` that comes with a catalog space,
/// in cohomology mode: each sphere class is hit by the first basis class
/// of `H̃^*(ΣX)` in its degree.
pub fn catalog_map(space: &SpaceId, p: u64) -> Result<ModPMap, KTheoryError> {
    let (q1, q2) = builtin_wedge_degrees(space).ok_or_else(|| KTheoryError::NoBuiltinMap {
        space: space.to_string(),
    })?;
    let poly = poincare_polynomial(space)?;
    let degrees = suspended_basis_degrees(&poly);
    let mut rows = vec![vec![0i64; degrees.len()]; 2];
    for (row, q) in [q1, q2].into_iter().enumerate() {
        // equal q for a wedge like Wedge(2,2): use distinct columns
        let col = degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == q + 1)
            .map(|(i, _)| i)
            .nth(if row == 1 && q1 == q2 { 1 } else { 0 })
            .ok_or_else(|| KTheoryError::NoBuiltinMap {
                space: space.to_string(),
            })?;
        rows[row][col] = 1;
    }
    ModPMap::new(p, q1, q2, rows, InputMode::Cohomology)
}
