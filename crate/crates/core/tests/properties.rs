use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phyper::catalog::SpaceId;
use phyper::freelie::{
    hall_basis, lie_to_tensor_matrix, multidegree_census, verify_leading_terms,
    verify_split_injection, GeneratorSpec, LeadingTermsInput,
};
use phyper::hyperbolicity::{
    certify_catalog_space, growth_profile, select_c, verify_eigenvalue_condition,
    wedge_summand_census,
};
use phyper::ktheory::{
    james_suspension_lambda_exponent, k_surjectivity_check, kmodel_from_poincare,
    lambda_exponent, omega_sigma_weight_ranks, InputMode, ModPMap,
};
use phyper::numtheory::{
    adams_m_valuation, mobius_power_sum, poincare_polynomial, witt_growth_ratio, witt_u64,
    PoincarePolynomial,
};
use phyper::oracles::{lyndon_count_generated, split_by_minors};
use phyper::output::CertificateDocument;
use phyper::stems::{detector_class, stable_summand_stem, StemCase};

const ODD_PRIMES: [u64; 6] = [3, 5, 7, 11, 13, 17];

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(ODD_PRIMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witt_matches_lyndon(n in 1u64..=4, k in 1u64..=10) {
        prop_assert_eq!(witt_u64(n, k).unwrap(), lyndon_count_generated(n, k));
    }

    #[test]
    fn mobius_sum_divisible_by_k(n in 1u64..=60, k in 1u64..=60) {
        let s = mobius_power_sum(n, k);
        prop_assert_eq!(s % num_bigint::BigInt::from(k), 0.into());
    }

    #[test]
    fn growth_ratio_bounds(k in 3u64..=60) {
        let r = witt_growth_ratio(2, k).unwrap();
        prop_assert!(r > BigRational::new(1.into(), 2.into()));
        prop_assert!(r < BigRational::one());
    }

    #[test]
    fn poincare_total_betti(n in 1u32..=6, k in 1u32..=4, m in 2u32..=4) {
        for space in [
            SpaceId::ComplexProjective(n),
            SpaceId::Grassmannian { k: k.min(n), n: n + 1 },
            SpaceId::Milnor { m, n: n + 2 },
            SpaceId::Unitary(n),
            SpaceId::Conf { k: k + 1, n: m + 1 },
        ] {
            let poly = poincare_polynomial(&space).unwrap();
            let at_one: u64 = poly.coefficients().iter().sum();
            prop_assert_eq!(at_one, poly.total_betti());
            prop_assert_eq!(poly.coefficient(0), 1);
        }
    }

    #[test]
    fn census_invariant_under_generator_permutation(
        degrees in prop::collection::vec(1u64..=3, 2..=3),
        rotate in 0usize..3,
        k in 1usize..=6,
    ) {
        let spec = GeneratorSpec::new(degrees.clone()).unwrap();
        let mut permuted = degrees.clone();
        permuted.rotate_left(rotate % degrees.len());
        let spec2 = GeneratorSpec::new(permuted).unwrap();
        let a = multidegree_census(hall_basis(&spec, k).weight(k), &spec);
        let b = multidegree_census(hall_basis(&spec2, k).weight(k), &spec2);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn tensor_rank_mod_p_is_witt(
        degrees in prop::collection::vec(1u64..=4, 2..=3),
        k in 1usize..=5,
        p in odd_prime(),
    ) {
        let n = degrees.len();
        prop_assume!(n == 2 || k <= 4);
        let spec = GeneratorSpec::new(degrees).unwrap();
        let e = lie_to_tensor_matrix(&spec, k).unwrap();
        prop_assert_eq!(e.rank_mod(p) as u64, witt_u64(n as u64, k as u64).unwrap());
        prop_assert!(e.injective_mod(p).unwrap());
    }

    #[test]
    fn even_specs_split(half in prop::collection::vec(1u64..=3, 2..=3), k in 1usize..=5) {
        prop_assume!(half.len() == 2 || k <= 4);
        let spec = GeneratorSpec::new(half.iter().map(|d| 2 * d).collect()).unwrap();
        let e = lie_to_tensor_matrix(&spec, k).unwrap();
        prop_assert!(verify_split_injection(&e).unwrap().split);
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        prop_assert!(split_by_minors(e.rows(), &mut rng));
    }

    #[test]
    fn leading_terms_identity(seed in any::<u64>(), v in 1usize..=2, w in 1usize..=2, k in 1usize..=3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = (0..v)
            .map(|_| (1..=3).map(|d| (0..w.pow(d)).map(|_| rng.gen_range(-5..=5)).collect()).collect())
            .collect();
        let input = LeadingTermsInput { v_rank: v, w_rank: w, max_weight: 3, images };
        prop_assert!(verify_leading_terms(&input, k).unwrap());
    }

    #[test]
    fn stem_witness_invariants(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), r in 1u32..=5) {
        let w = stable_summand_stem(p, r).unwrap();
        prop_assert_eq!(w, stable_summand_stem(p, r).unwrap());
        match w.case {
            StemCase::OddPrimary => {
                let t = w.t.unwrap();
                prop_assert_eq!(t, p.pow(r - 1) * (p - 1));
                prop_assert_eq!(w.j % 8, 7);
                prop_assert_eq!(adams_m_valuation(p, 2 * t).unwrap(), r);
            }
            StemCase::TwoPrimary => {
                prop_assert_eq!(w.t.unwrap(), 1 << (r - 3));
                prop_assert_eq!(adams_m_valuation(2, 2 * w.t.unwrap()).unwrap(), r);
            }
            StemCase::SmallTwoPrimary => {
                prop_assert!(matches!((p, r, w.j), (2, 1, 1) | (2, 2, 34)));
            }
        }
    }

    #[test]
    fn detector_degrees(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), j in 1u64..=50) {
        let d = detector_class(p, j).unwrap();
        if p == 2 {
            prop_assert_eq!(d.domain_degree, 8 * j + 6);
            prop_assert_eq!(d.order, 4);
        } else {
            prop_assert_eq!(d.domain_degree, 2 * j * (p - 1) + 2);
            prop_assert_eq!(d.domain_degree % 2, 0);
            prop_assert_eq!(d.e_value.num, p as i64 - 1);
        }
    }

    #[test]
    fn lambda_is_half_top_degree(tail in prop::collection::vec(0u64..=3, 1..=12)) {
        let mut coeffs = vec![1u64];
        coeffs.extend(tail);
        let poly = PoincarePolynomial::new(coeffs);
        prop_assume!(poly.top_degree() > 0);
        let model = kmodel_from_poincare(&poly, 1).unwrap();
        prop_assert_eq!(lambda_exponent(&model) as usize, poly.top_degree().div_ceil(2));
        prop_assert!(!model.even_exponents.contains_key(&0));
        prop_assert!(!model.susp_exponents.contains_key(&0));
    }

    #[test]
    fn james_monotone(tail in prop::collection::vec(0u64..=2, 1..=8), s in 1u32..=6, susp in 0u32..=10) {
        let mut coeffs = vec![1u64];
        coeffs.extend(tail);
        let model = kmodel_from_poincare(&PoincarePolynomial::new(coeffs), 1).unwrap();
        let f = |s, n| james_suspension_lambda_exponent(&model, s, n);
        prop_assert!(f(s, susp) <= f(s + 1, susp));
        prop_assert!(f(s, susp) <= f(s, susp + 2));
    }

    #[test]
    fn omega_sigma_totals(tail in prop::collection::vec(0u64..=3, 1..=8), k in 1u32..=12) {
        let mut coeffs = vec![1u64];
        coeffs.extend(tail);
        let model = kmodel_from_poincare(&PoincarePolynomial::new(coeffs), 1).unwrap();
        let (e, o) = model.graded_rank();
        let (even, odd) = omega_sigma_weight_ranks(&model, k);
        let total: BigUint = Pow::pow(&BigUint::from(e + o), k);
        prop_assert_eq!(even + odd, total);
    }

    #[test]
    fn surjectivity_invariant_under_basis_change(
        p in odd_prime(),
        rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 4), 2),
        a in 0i64..20, b in 0i64..20, c in 0i64..20, d in 0i64..20,
        col_factor in -5i64..=5, swap in 0usize..4,
    ) {
        let det = (a * d - b * c).rem_euclid(p as i64);
        prop_assume!(det != 0);
        let base = ModPMap::new(p, 2, 4, rows.clone(), InputMode::KTheory).unwrap();
        // row operations: left multiply by [[a, b], [c, d]]
        let mixed: Vec<Vec<i64>> = vec![
            (0..4).map(|j| a * rows[0][j] + b * rows[1][j]).collect(),
            (0..4).map(|j| c * rows[0][j] + d * rows[1][j]).collect(),
        ];
        // source basis change: col_0 += f col_1, then swap two columns
        let changed: Vec<Vec<i64>> = mixed
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r[0] += col_factor * r[1];
                r.swap(swap, 3 - swap);
                r
            })
            .collect();
        let other = ModPMap::new(p, 2, 4, changed, InputMode::KTheory).unwrap();
        prop_assert_eq!(k_surjectivity_check(&base), k_surjectivity_check(&other));
    }

    #[test]
    fn select_c_monotone_in_p(i in 0u32..=12, q1 in 1u64..=8, q2 in 1u64..=8, idx in 0usize..5) {
        let (lo, hi) = (ODD_PRIMES[idx], ODD_PRIMES[idx + 1]);
        let (qmin, qmax) = (q1.min(q2), q1.max(q2));
        prop_assert!(select_c(i, qmin, qmax, hi).unwrap() <= select_c(i, qmin, qmax, lo).unwrap());
    }

    #[test]
    fn certificate_invariants(n in 2u32..=5, p in prop::sample::select(vec![3u64, 5, 7]), k_max in 1u64..=14) {
        let outcome = certify_catalog_space(&SpaceId::ComplexProjective(n), p, k_max).unwrap();
        let cert = outcome.certificate().unwrap();
        prop_assert!(cert.a > 0);
        prop_assert_eq!(cert.a, 2 * cert.c * (p - 1) + cert.q_max);
        for k in cert.k0..=cert.k0 + 20 {
            for big_n in k * cert.q_min..=k * cert.q_max {
                prop_assert!(verify_eigenvalue_condition(cert.c, k, big_n, cert.i_lambda, cert.q_max, p));
            }
        }
        for row in &cert.rows {
            prop_assert!(row.total() >= witt_u64(2, row.k).unwrap());
            let (lo, hi) = row.window.unwrap();
            prop_assert!(row.degrees.keys().all(|d| lo <= *d && *d <= hi));
        }
        let doc = CertificateDocument::from_certificate(cert);
        prop_assert_eq!(CertificateDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn wedge_census_invariants(
        q1 in 1u64..=6, q2 in 1u64..=6,
        p in prop::sample::select(vec![2u64, 3, 5]), r in 1u32..=3,
        extra in 0u64..=6,
    ) {
        let witness = stable_summand_stem(p, r).unwrap();
        let (qa, qb) = (q1.min(q2), q1.max(q2));
        let k0 = (witness.j + 1).div_ceil(qa);
        prop_assume!(k0 + extra <= 60);
        let c = wedge_summand_census(q1, q2, p, r, k0 + extra).unwrap();
        prop_assert_eq!(c.k0, k0);
        prop_assert_eq!(c.rows.len() as u64, extra + 1);
        let j = witness.j;
        for row in &c.rows {
            let k = row.k;
            prop_assert_eq!(row.total(), witt_u64(2, k).unwrap());
            let lo = *row.degrees.keys().next().unwrap();
            let hi = *row.degrees.keys().next_back().unwrap();
            if k == 1 {
                prop_assert_eq!((lo, hi), (qa + j + 1, qb + j + 1));
            } else if qa == qb {
                prop_assert_eq!((lo, hi), (k * qa + j + 1, k * qa + j + 1));
            } else {
                // a Lie word of weight >= 2 uses both generators
                prop_assert_eq!(lo, (k - 1) * qa + qb + j + 1);
                prop_assert_eq!(hi, qa + (k - 1) * qb + j + 1);
            }
        }
        let doc = CertificateDocument::from_wedge(&c, "Wedge");
        prop_assert_eq!(CertificateDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn growth_comparisons_are_exact(extra in 0u64..=30) {
        let c = wedge_summand_census(1, 1, 3, 1, 8 + extra).unwrap();
        let g = growth_profile(&c);
        let mut running = 0u64;
        for pt in &g.points {
            running += witt_u64(2, pt.m - 8).unwrap();
            prop_assert_eq!(pt.t_m, running);
            let bound = if pt.bound_exponent < 0 {
                BigUint::from(0u32)
            } else {
                Pow::pow(&BigUint::from(2u32), pt.bound_exponent as u64)
            };
            prop_assert_eq!(pt.meets_bound, BigUint::from(pt.t_m) >= bound && pt.t_m > 0);
            prop_assert_eq!(pt.bound_exponent, pt.m as i64 - g.s0);
        }
    }

    #[test]
    fn cli_is_deterministic(n in 2u32..=4, p in prop::sample::select(vec![3u64, 5]), kmax in 1u64..=8) {
        let args = |fmt: &str| {
            vec![
                "phyper".to_string(), "certify".into(), "--space".into(), format!("CP({n})"),
                "--p".into(), p.to_string(), "--kmax".into(), kmax.to_string(),
                "--format".into(), fmt.to_string(),
            ]
        };
        for fmt in ["json", "csv", "text"] {
            prop_assert_eq!(phyper::cli::run(args(fmt)), phyper::cli::run(args(fmt)));
        }
    }
}
