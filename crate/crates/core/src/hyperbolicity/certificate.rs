use serde::{Deserialize, Serialize};

use super::{check_k_max, shifted_weight_census, HyperError, SummandCensus, SummandRow};
use crate::catalog::SpaceId;
use crate::ktheory::{
    builtin_wedge_degrees, catalog_kmodel, catalog_map, k_surjectivity_check, lambda_exponent,
    InputMode, KModel, ModPMap,
};
use crate::numtheory::is_prime;

/// How far past `k_0` the eigenvalue inequality is re-checked exhaustively.
pub const EXHAUSTIVE_MARGIN: u64 = 20;

/// `p`-hyperbolicity of `Σ^n X` for every `n >= 1`, with the summand count
/// it guarantees in each degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PHypCertificate {
    pub space: String,
    pub p: u64,
    /// Exponent `i` of `λ_ℓ = ℓ^i`.
    pub i_lambda: u32,
    pub q_min: u64,
    pub q_max: u64,
    pub c: u64,
    /// `2c(p-1) + q_min - 2 i q_max`, positive.
    pub slack: u64,
    /// `c` was raised by one past the minimal choice to make the slack positive.
    pub c_bumped: bool,
    pub k0: u64,
    pub k_max: u64,
    /// Slope of the degree bound `m <= a k + b`.
    pub a: u64,
    pub b: u64,
    pub input_mode: InputMode,
    pub rows: Vec<SummandRow>,
    /// The eigenvalue condition was checked for every `k <= verified_through`.
    pub verified_through: u64,
    pub oracles_checked: Vec<String>,
}

impl SummandCensus for PHypCertificate {
    fn rows(&self) -> &[SummandRow] {
        &self.rows
    }

    fn a(&self) -> u64 {
        self.a
    }

    fn b(&self) -> u64 {
        self.b
    }
}

/// A hypothesis of the certificate that the input does not satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum HypothesisFailure {
    /// `(μ_1 ∨ μ_2)^*` is not onto `Z/p ⊕ Z/p`.
    NotSurjective { rank: usize },
    NoBuiltinMap { space: String },
    EvenPrime { p: u64 },
}

impl std::fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HypothesisFailure::NotSurjective { rank } => {
                write!(f, "K-theory map has rank {rank} over F_p, need 2")
            }
            HypothesisFailure::NoBuiltinMap { space } => {
                write!(f, "{space} has no built-in map from a wedge of two spheres")
            }
            HypothesisFailure::EvenPrime { p } => write!(f, "p = {p} is even"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificationOutcome {
    Certified(Box<PHypCertificate>),
    HypothesisFailure(HypothesisFailure),
}

impl CertificationOutcome {
    pub fn certificate(&self) -> Option<&PHypCertificate> {
        match self {
            CertificationOutcome::Certified(c) => Some(c),
            CertificationOutcome::HypothesisFailure(_) => None,
        }
    }
}

/// Smallest `c >= 1` with `c (p - 1) >= q_max i - q_min / 2`.
pub fn select_c(i_lambda: u32, q_min: u64, q_max: u64, p: u64) -> Result<u64, HyperError> {
    if !is_prime(p) {
        return Err(HyperError::NotPrime(p));
    }
    if p == 2 {
        return Err(HyperError::EvenPrime(p));
    }
    // doubled to stay integral: 2c(p-1) >= 2 q_max i - q_min
    let need = 2 * q_max as i128 * i_lambda as i128 - q_min as i128;
    let step = 2 * (p as i128 - 1);
    let c = if need <= 0 { 1 } else { (need + step - 1) / step };
    Ok(c.max(1) as u64)
}

/// `ℓ^{ck(p-1)} ℓ^{(N-1)/2} > λ_ℓ^{k q_max + 1}`, as exponents of ℓ
/// (doubled to stay integral).
pub fn verify_eigenvalue_condition(c: u64, k: u64, n: u64, i_lambda: u32, q_max: u64, p: u64) -> bool {
    let lhs = 2 * c as i128 * k as i128 * (p as i128 - 1) + n as i128 - 1;
    let rhs = 2 * i_lambda as i128 * (k as i128 * q_max as i128 + 1);
    lhs > rhs
}

/// Adams-operation certificate for `ΣX` from a K-theory model and a map
/// `S^{q_1+1} ∨ S^{q_2+1} → ΣX`.
pub fn k_detection_certificate(
    space: &str,
    model: &KModel,
    map: &ModPMap,
    p: u64,
    k_max: u64,
) -> Result<CertificationOutcome, HyperError> {
    if !is_prime(p) {
        return Err(HyperError::NotPrime(p));
    }
    if p == 2 {
        return Ok(CertificationOutcome::HypothesisFailure(
            HypothesisFailure::EvenPrime { p },
        ));
    }
    if map.p() != p {
        return Err(HyperError::PrimeMismatch {
            map: map.p(),
            requested: p,
        });
    }
    check_k_max(k_max)?;
    if !k_surjectivity_check(map) {
        return Ok(CertificationOutcome::HypothesisFailure(
            HypothesisFailure::NotSurjective { rank: map.rank() },
        ));
    }
    let i = lambda_exponent(model);
    let (q_min, q_max) = (map.q_min(), map.q_max());
    let slack_for = |c: u64| 2 * c as i128 * (p as i128 - 1) + q_min as i128 - 2 * i as i128 * q_max as i128;
    let mut c = select_c(i, q_min, q_max, p)?;
    let mut c_bumped = false;
    if slack_for(c) <= 0 {
        // only the boundary case slack == 0 reaches here
        c += 1;
        c_bumped = true;
    }
    let slack = slack_for(c);
    assert!(slack > 0);
    let slack = slack as u64;
    let k0 = (2 * i as u64 + 1) / slack + 1;

    // k_0 is where the inequality starts holding at the bottom of the window
    assert!(verify_eigenvalue_condition(c, k0, k0 * q_min, i, q_max, p));
    if k0 > 1 {
        assert!(!verify_eigenvalue_condition(c, k0 - 1, (k0 - 1) * q_min, i, q_max, p));
    }
    let verified_through = k_max.max(k0 + EXHAUSTIVE_MARGIN);
    for k in k0..=verified_through {
        for n in k * q_min..=k * q_max {
            assert!(
                verify_eigenvalue_condition(c, k, n, i, q_max, p),
                "eigenvalue condition fails at k={k}, N={n}"
            );
        }
    }

    let shift_per_k = 2 * c * (p - 1);
    let rows = (k0..=k_max)
        .map(|k| {
            let shift = shift_per_k * k;
            let mut row = shifted_weight_census(q_min, q_max, k, shift);
            row.window = Some((k * q_min + shift, k * q_max + shift));
            row
        })
        .collect();
    Ok(CertificationOutcome::Certified(Box::new(PHypCertificate {
        space: space.to_string(),
        p,
        i_lambda: i,
        q_min,
        q_max,
        c,
        slack,
        c_bumped,
        k0,
        k_max,
        a: shift_per_k + q_max,
        b: 0,
        input_mode: map.mode(),
        rows,
        verified_through,
        oracles_checked: vec![
            "k-surjectivity-rank-mod-p".to_string(),
            format!("eigenvalue-condition(k<={verified_through})"),
            "k0-minimal".to_string(),
            "witt-total-per-row".to_string(),
            format!("hall-enumeration(k<={})", super::ENUMERATION_CROSSCHECK_WEIGHT),
        ],
    })))
}

/// Certificate for a catalog space using its built-in model and map.
pub fn certify_catalog_space(space: &SpaceId, p: u64, k_max: u64) -> Result<CertificationOutcome, HyperError> {
    if !is_prime(p) {
        return Err(HyperError::NotPrime(p));
    }
    if builtin_wedge_degrees(space).is_none() {
        return Ok(CertificationOutcome::HypothesisFailure(
            HypothesisFailure::NoBuiltinMap {
                space: space.to_string(),
            },
        ));
    }
    let model = catalog_kmodel(space)?;
    let map = catalog_map(space, p)?;
    k_detection_certificate(&space.to_string(), &model, &map, p, k_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::witt_u64;

    fn cert(space: &str, p: u64, k_max: u64) -> PHypCertificate {
        certify_catalog_space(&space.parse().unwrap(), p, k_max)
            .unwrap()
            .certificate()
            .unwrap()
            .clone()
    }

    #[test]
    fn select_c_examples() {
        assert_eq!(select_c(2, 2, 4, 3), Ok(4));
        assert_eq!(select_c(2, 2, 4, 5), Ok(2));
        assert_eq!(select_c(0, 2, 4, 3), Ok(1));
        assert_eq!(select_c(4, 2, 4, 3), Ok(8));
        assert_eq!(select_c(1, 1, 1, 2), Err(HyperError::EvenPrime(2)));
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(verify_eigenvalue_condition(4, 3, 6, 2, 4, 3));
        assert!(!verify_eigenvalue_condition(4, 2, 4, 2, 4, 3));
    }

    #[test]
    fn suspended_cp2() {
        let c = cert("CP(2)", 3, 10);
        assert_eq!((c.i_lambda, c.c, c.slack, c.k0, c.a, c.b), (2, 4, 2, 3, 20, 0));
        assert!(!c.c_bumped);
        assert_eq!(c.rows.len(), 8);
        let first = &c.rows[0];
        assert_eq!(first.k, 3);
        assert_eq!(first.window, Some((6 + 48, 12 + 48)));
        assert_eq!(first.total(), witt_u64(2, 3).unwrap());

        let c5 = cert("CP(2)", 5, 10);
        assert_eq!((c5.c, c5.a, c5.k0), (2, 20, 3));
    }

    #[test]
    fn grassmannian() {
        let c = cert("Gr(2,4)", 3, 12);
        assert_eq!((c.i_lambda, c.c, c.slack, c.k0, c.a), (4, 8, 2, 5, 36));
    }

    #[test]
    fn boundary_slack_bumps_c() {
        // i = 1, q = (4, 4), p = 3: c = 1 meets 2c(p-1) >= 2 i q_max - q_min with equality
        let model = KModel {
            even_exponents: [(1, 1)].into(),
            ..KModel::default()
        };
        let map = ModPMap::new(3, 4, 4, vec![vec![1, 0], vec![0, 1]], InputMode::KTheory).unwrap();
        let c = k_detection_certificate("test", &model, &map, 3, 6)
            .unwrap()
            .certificate()
            .unwrap()
            .clone();
        assert!(c.c_bumped);
        assert_eq!((c.c, c.slack), (2, 4));
    }

    #[test]
    fn hypothesis_failures() {
        let model = catalog_kmodel(&"CP(2)".parse().unwrap()).unwrap();
        let dead = ModPMap::new(3, 2, 4, vec![vec![1, 1], vec![2, 2]], InputMode::KTheory).unwrap();
        assert_eq!(
            k_detection_certificate("CP(2)", &model, &dead, 3, 10).unwrap(),
            CertificationOutcome::HypothesisFailure(HypothesisFailure::NotSurjective { rank: 1 })
        );
        assert!(matches!(
            certify_catalog_space(&SpaceId::Sphere(3), 3, 10).unwrap(),
            CertificationOutcome::HypothesisFailure(HypothesisFailure::NoBuiltinMap { .. })
        ));
        assert!(matches!(
            certify_catalog_space(&SpaceId::ComplexProjective(2), 2, 10).unwrap(),
            CertificationOutcome::HypothesisFailure(HypothesisFailure::EvenPrime { p: 2 })
        ));
        assert!(certify_catalog_space(&SpaceId::ComplexProjective(2), 9, 10).is_err());
        let map5 = catalog_map(&SpaceId::ComplexProjective(2), 5).unwrap();
        assert!(matches!(
            k_detection_certificate("CP(2)", &model, &map5, 3, 10),
            Err(HyperError::PrimeMismatch { .. })
        ));
    }

    #[test]
    fn unitary_group() {
        let c = cert("U(3)", 3, 8);
        assert_eq!((c.q_min, c.q_max, c.i_lambda), (3, 5, 5));
        // 2c(p-1) >= 2*5*5 - 3 = 47, c = 12
        assert_eq!(c.c, 12);
        assert!(c.rows.iter().all(|r| r.k >= c.k0));
    }
}
