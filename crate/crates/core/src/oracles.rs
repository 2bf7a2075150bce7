//! Independent recomputations of the library's core quantities, each by a
//! route that shares no code with the routine it checks.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::freelie::{
    hall_basis, lie_to_tensor_matrix, multidegree_census, multidegree_census_by_formula,
    verify_leading_terms, verify_split_injection, GeneratorSpec, LeadingTermsInput,
};
use crate::numtheory::{padic_val, witt_u64};
use crate::stems::{stable_summand_stem, StemCase};

/// Fixed seed for every randomized oracle.
pub const ORACLE_SEED: u64 = 0x5eed_2024;

/// Largest `n^k` the rotation brute force will walk through.
pub const BRUTE_FORCE_WORDS: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Numtheory,
    Freelie,
    Stems,
    All,
}

impl Scope {
    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

/// Tally for one oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub scope: Scope,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl OracleCheck {
    fn new(name: &str, scope: Scope) -> Self {
        Self {
            name: name.to_string(),
            scope,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&OracleCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {} ({} checks)", c.name, c.checks)?;
            for failure in &c.failures {
                writeln!(f, "  {failure}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- Lyndon

/// Lyndon words of length k over n letters, by testing every word against
/// all of its rotations.
pub fn lyndon_count_bruteforce(n: u64, k: u64) -> u64 {
    assert!(n >= 1 && k >= 1);
    let total = n.checked_pow(k as u32).expect("too many words");
    assert!(total <= BRUTE_FORCE_WORDS, "{n}^{k} words is too many to walk");
    let k = k as usize;
    let mut word = vec![0u64; k];
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        for slot in word.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        if (1..k).all(|s| word[..] < [&word[s..], &word[..s]].concat()[..]) {
            count += 1;
        }
    }
    count
}

/// Lyndon words of length exactly k over n letters, generated in
/// lexicographic order by Duval's successor rule.
pub fn lyndon_count_generated(n: u64, k: u64) -> u64 {
    assert!(n >= 1 && k >= 1);
    let k = k as usize;
    let mut w: Vec<u64> = vec![0];
    let mut count = 0;
    loop {
        if w.len() == k {
            count += 1;
        }
        // extend periodically to length k, then strip maximal letters
        let m = w.len();
        while w.len() < k {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(n - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => return count,
        }
    }
}

/// `W_n(k)` against a Lyndon count for `n <= 4`, `k <= 12`.
fn witt_vs_lyndon() -> OracleCheck {
    let mut out = OracleCheck::new("witt-vs-lyndon", Scope::Numtheory);
    for n in 1..=4u64 {
        for k in 1..=12u64 {
            let witt = witt_u64(n, k).unwrap();
            let lyndon = if n.pow(k as u32) <= BRUTE_FORCE_WORDS {
                lyndon_count_bruteforce(n, k)
            } else {
                lyndon_count_generated(n, k)
            };
            out.check(witt == lyndon, || format!("W_{n}({k}) = {witt}, Lyndon count {lyndon}"));
        }
    }
    out
}

fn lyndon_methods_agree() -> OracleCheck {
    let mut out = OracleCheck::new("lyndon-bruteforce-vs-generated", Scope::Numtheory);
    for n in 1..=4u64 {
        for k in 1..=10u64 {
            if n.pow(k as u32) > BRUTE_FORCE_WORDS {
                continue;
            }
            let a = lyndon_count_bruteforce(n, k);
            let b = lyndon_count_generated(n, k);
            out.check(a == b, || format!("n={n} k={k}: {a} vs {b}"));
        }
    }
    out
}

// ------------------------------------------------------------ Hall bases

fn hall_vs_witt() -> OracleCheck {
    let mut out = OracleCheck::new("hall-basis-vs-witt", Scope::Freelie);
    for (n, top) in [(2usize, 14usize), (3, 12), (4, 12)] {
        let basis = hall_basis(&GeneratorSpec::ungraded(n), top);
        for k in 1..=top {
            let got = basis.count(k) as u64;
            let want = witt_u64(n as u64, k as u64).unwrap();
            out.check(got == want, || format!("|L_{k}| on {n} generators: {got} vs W = {want}"));
        }
    }
    out
}

fn census_formula_vs_enumeration() -> OracleCheck {
    let mut out = OracleCheck::new("census-formula-vs-enumeration", Scope::Freelie);
    for degrees in [vec![1, 1], vec![1, 2], vec![2, 3], vec![2, 4], vec![1, 1, 2], vec![1, 2, 3]] {
        let spec = GeneratorSpec::new(degrees.clone()).unwrap();
        let top = if degrees.len() == 2 { 12 } else { 8 };
        let basis = hall_basis(&spec, top);
        for k in 1..=top {
            let enumerated = multidegree_census(basis.weight(k), &spec);
            let formula: std::collections::BTreeMap<u64, u64> = multidegree_census_by_formula(&spec, k)
                .into_iter()
                .map(|(d, c)| (d, c.to_u64().unwrap()))
                .collect();
            out.check(enumerated == formula, || format!("degrees {degrees:?}, k={k}"));
        }
    }
    out
}

// ------------------------------------------------------ split injection

fn pivot_columns_mod_p(rows: &[Vec<i64>], order: &[usize], p: i64) -> Option<Vec<usize>> {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| order.iter().map(|&c| r[c].rem_euclid(p)).collect())
        .collect();
    let (nr, nc) = (m.len(), order.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        let Some(i) = (r..nr).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, i);
        // Fermat inverse
        let mut inv = 1i64;
        let (mut base, mut e) = (m[r][c], p - 2);
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c] * inv % p;
                for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        pivots.push(order[c]);
        r += 1;
        if r == nr {
            return Some(pivots);
        }
    }
    None
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, i);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Whether the maximal minors of a full-row-rank integer matrix have gcd
/// 1, searched over minors chosen by pivoting mod small primes and over
/// random column orders.
pub fn split_by_minors(rows: &[Vec<i64>], rng: &mut ChaCha8Rng) -> bool {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return true;
    };
    let natural: Vec<usize> = (0..ncols).collect();
    let mut gcd = BigInt::zero();
    let minor = |cols: &[usize]| {
        let sq: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| BigInt::from(r[c])).collect())
            .collect();
        bareiss_determinant(sq)
    };
    let try_order = |order: &[usize], p: i64, gcd: &mut BigInt| {
        if let Some(cols) = pivot_columns_mod_p(rows, order, p) {
            *gcd = gcd.gcd(&minor(&cols));
        }
        gcd.abs().is_one()
    };
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if try_order(&natural, p, &mut gcd) {
            return true;
        }
    }
    for _ in 0..64 {
        let mut order = natural.clone();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        if try_order(&order, 101, &mut gcd) {
            return true;
        }
    }
    false
}

fn split_injection_snf_vs_minors(rng: &mut ChaCha8Rng) -> OracleCheck {
    let mut out = OracleCheck::new("split-injection-snf-vs-minors", Scope::Freelie);
    for degrees in [vec![2, 2], vec![2, 4], vec![2, 2, 2], vec![2, 4, 6]] {
        let spec = GeneratorSpec::new(degrees.clone()).unwrap();
        for k in 1..=5 {
            let e = lie_to_tensor_matrix(&spec, k).unwrap();
            let snf = verify_split_injection(&e).unwrap().split;
            let minors = split_by_minors(e.rows(), rng);
            out.check(snf && minors, || {
                format!("degrees {degrees:?} k={k}: snf split={snf}, minors gcd 1={minors}")
            });
        }
    }
    out
}

fn odd_generator_rank() -> OracleCheck {
    let mut out = OracleCheck::new("odd-generators-rank-mod-p", Scope::Freelie);
    for degrees in [vec![1, 1], vec![1, 2], vec![1, 3], vec![1, 1, 2]] {
        let spec = GeneratorSpec::new(degrees.clone()).unwrap();
        let top = if degrees.len() == 2 { 7 } else { 5 };
        for k in 1..=top {
            let e = lie_to_tensor_matrix(&spec, k).unwrap();
            let w = witt_u64(degrees.len() as u64, k as u64).unwrap() as usize;
            for p in [3, 5, 7] {
                let rank = e.rank_mod(p);
                out.check(rank == w, || format!("degrees {degrees:?} k={k} p={p}: rank {rank}, W {w}"));
            }
        }
    }
    out
}

// ---------------------------------------------------------- leading terms

type Poly = HashMap<Vec<usize>, BigInt>;

fn to_poly(components: &[Vec<i64>], w_rank: usize) -> Poly {
    let mut out = Poly::new();
    for (w, comp) in components.iter().enumerate() {
        for (code, &x) in comp.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let mut word = vec![0; w + 1];
            let mut c = code;
            for slot in word.iter_mut().rev() {
                *slot = c % w_rank;
                c /= w_rank;
            }
            out.insert(word, BigInt::from(x));
        }
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly, top: usize) -> Poly {
    let mut out = Poly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > top {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn weight_part(p: &Poly, k: usize) -> Poly {
    p.iter()
        .filter(|(w, _)| w.len() == k)
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect()
}

fn random_input(rng: &mut ChaCha8Rng, v: usize, w: usize, top: usize) -> LeadingTermsInput {
    let images = (0..v)
        .map(|_| {
            (1..=top)
                .map(|d| (0..w.pow(d as u32)).map(|_| rng.gen_range(-3..=3)).collect())
                .collect()
        })
        .collect();
    LeadingTermsInput {
        v_rank: v,
        w_rank: w,
        max_weight: top,
        images,
    }
}

/// Shapes `(dim V, dim W, truncation, k)` of the randomized suite.
pub const LEADING_TERMS_SHAPES: [(usize, usize, usize, usize); 5] =
    [(2, 2, 3, 2), (2, 2, 3, 3), (3, 2, 2, 2), (1, 3, 4, 4), (2, 3, 2, 2)];

/// Weight-k part of a product of k images equals the product of their
/// weight-1 parts, computed with word dictionaries and compared with
/// [`verify_leading_terms`].
pub fn leading_terms_randomized(rng: &mut ChaCha8Rng, per_shape: usize) -> OracleCheck {
    let mut out = OracleCheck::new("leading-terms-randomized", Scope::Freelie);
    for &(v, w, top, k) in &LEADING_TERMS_SHAPES {
        for trial in 0..per_shape {
            let input = random_input(rng, v, w, top);
            let full: Vec<Poly> = input.images.iter().map(|img| to_poly(img, w)).collect();
            let linear: Vec<Poly> = input.images.iter().map(|img| to_poly(&img[..1], w)).collect();
            let mut identity = true;
            for code in 0..v.pow(k as u32) {
                let mut idx = Vec::with_capacity(k);
                let mut c = code;
                for _ in 0..k {
                    idx.push(c % v);
                    c /= v;
                }
                let lhs = idx[1..].iter().fold(full[idx[0]].clone(), |acc, &i| poly_mul(&acc, &full[i], k));
                let rhs = idx[1..].iter().fold(linear[idx[0]].clone(), |acc, &i| poly_mul(&acc, &linear[i], k));
                identity &= weight_part(&lhs, k) == rhs;
            }
            let library = verify_leading_terms(&input, k).unwrap();
            out.check(identity && library, || {
                format!("shape ({v},{w},{top},{k}) trial {trial}: oracle {identity}, library {library}")
            });
        }
    }
    out
}

// ------------------------------------------------------------------ stems

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = +1/2`), Akiyama-Tanigawa.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = (&a[j - 1] - &a[j]) * BigRational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    out
}

/// `m(2t)`: the denominator of `B_{2t} / 4t`.
pub fn adams_m_from_bernoulli(two_t: usize, bernoulli: &[BigRational]) -> BigInt {
    let q = &bernoulli[two_t] / BigRational::from_integer(BigInt::from(2 * two_t));
    q.denom().clone()
}

fn stems_vs_bernoulli() -> OracleCheck {
    let mut out = OracleCheck::new("stem-witness-vs-bernoulli", Scope::Stems);
    const TOP: usize = 96;
    let b = bernoulli_numbers(TOP);
    for p in [2u64, 3, 5, 7, 11, 13] {
        for r in 1..=5u32 {
            let w = stable_summand_stem(p, r).unwrap();
            let Some(t) = w.t else {
                out.check(w.case == StemCase::SmallTwoPrimary && p == 2, || format!("p={p} r={r}"));
                continue;
            };
            out.check(w.j == 4 * t - 1, || format!("p={p} r={r}: j={} t={t}", w.j));
            if 2 * t as usize > TOP {
                continue;
            }
            let m = adams_m_from_bernoulli(2 * t as usize, &b);
            let nu = padic_val(p, m.to_i128().unwrap()).unwrap();
            out.check(nu == r, || format!("p={p} r={r}: nu_p(m({})) = {nu}", 2 * t));
        }
    }
    out
}

/// Run every oracle in `scope`.
pub fn verify_oracles(scope: Scope) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut checks = Vec::new();
    if scope.includes(Scope::Numtheory) {
        checks.push(witt_vs_lyndon());
        checks.push(lyndon_methods_agree());
    }
    if scope.includes(Scope::Freelie) {
        checks.push(hall_vs_witt());
        checks.push(census_formula_vs_enumeration());
        checks.push(split_injection_snf_vs_minors(&mut rng));
        checks.push(odd_generator_rank());
        checks.push(leading_terms_randomized(&mut rng, 100));
    }
    if scope.includes(Scope::Stems) {
        checks.push(stems_vs_bernoulli());
    }
    OracleReport { checks }
}
