//! Exact number-theoretic primitives.
//!
//! Everything here is integer or rational arithmetic; `2^k` leaves machine
//! words long before the weights we care about, so counts are `BigUint`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::catalog::SpaceId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumTheoryError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("no cohomology data for catalog space {0}")]
    UnknownSpace(String),
}

pub type Result<T> = std::result::Result<T, NumTheoryError>;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The Möbius function.
pub fn mobius(s: u64) -> Result<i8> {
    if s == 0 {
        return Err(NumTheoryError::Domain("mobius(0) is undefined".into()));
    }
    let mut sign = 1i8;
    for (_, e) in factorize(s) {
        if e > 1 {
            return Ok(0);
        }
        sign = -sign;
    }
    Ok(sign)
}

/// The signed necklace sum `Σ_{d|k} μ(d) n^{k/d}`.
pub fn mobius_power_sum(n: u64, k: u64) -> BigInt {
    let base = BigInt::from(n);
    let mut sum = BigInt::zero();
    for d in divisors(k) {
        let mu = mobius(d).expect("divisors are positive");
        if mu == 0 {
            continue;
        }
        let term: BigInt = Pow::pow(&base, k / d);
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Arguments of the Witt formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WittInput {
    n: u64,
    k: u64,
}

impl WittInput {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(NumTheoryError::Domain(format!(
                "Witt formula needs n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn generators(&self) -> u64 {
        self.n
    }

    pub fn weight(&self) -> u64 {
        self.k
    }

    pub fn value(&self) -> BigUint {
        let sum = mobius_power_sum(self.n, self.k);
        let (q, r) = sum.div_rem(&BigInt::from(self.k));
        assert!(
            r.is_zero(),
            "necklace sum for n={}, k={} is not divisible by k",
            self.n,
            self.k
        );
        q.to_biguint().expect("Witt numbers are nonnegative")
    }
}

/// `W_n(k) = (1/k) Σ_{d|k} μ(d) n^{k/d}`.
///
/// Panics if `n` or `k` is zero.
pub fn witt(n: u64, k: u64) -> BigUint {
    WittInput::new(n, k).expect("witt: n and k must be positive").value()
}

/// `W_n(k)` as a `u64`, or `None` once it no longer fits.
pub fn witt_u64(n: u64, k: u64) -> Option<u64> {
    witt(n, k).to_u64()
}

/// Largest `e` with `p^e | n`.
pub fn padic_val(p: u64, n: i128) -> Result<u32> {
    if n == 0 {
        return Err(NumTheoryError::Domain("valuation of 0 is infinite".into()));
    }
    if !is_prime(p) {
        return Err(NumTheoryError::Domain(format!("{p} is not prime")));
    }
    let p = p as i128;
    let mut n = n.abs();
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// p-adic valuation of Adams' `m(2t)`, in the two regimes where it is used:
/// odd `p` with `(p-1) | 2t` gives `1 + ν_p(2t)`, and `p = 2` gives
/// `2 + ν_2(2t)`. Anything else is refused.
pub fn adams_m_valuation(p: u64, two_t: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(NumTheoryError::Domain(format!("{p} is not prime")));
    }
    if two_t == 0 || !two_t.is_multiple_of(2) {
        return Err(NumTheoryError::Domain(format!(
            "argument must be a positive even integer, got {two_t}"
        )));
    }
    if p == 2 {
        return Ok(2 + padic_val(2, two_t as i128)?);
    }
    if !two_t.is_multiple_of(p - 1) {
        return Err(NumTheoryError::Unsupported(format!(
            "nu_{p}(m({two_t})) with ({p}-1) not dividing {two_t}"
        )));
    }
    Ok(1 + padic_val(p, two_t as i128)?)
}

/// `W_n(k) · k / n^k`, exactly.
pub fn witt_growth_ratio(n: u64, k: u64) -> Result<BigRational> {
    if n < 2 {
        return Err(NumTheoryError::Domain(format!(
            "growth ratio needs n >= 2, got {n}"
        )));
    }
    let w = BigInt::from(WittInput::new(n, k)?.value());
    let num = w * BigInt::from(k);
    let den: BigInt = Pow::pow(&BigInt::from(n), k);
    Ok(BigRational::new(num, den))
}

/// Rational-cohomology Poincaré polynomial, indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    coefficients: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn new(mut coefficients: Vec<u64>) -> Self {
        while coefficients.len() > 1 && *coefficients.last().unwrap() == 0 {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        Self { coefficients }
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// `1 + t^d`, the Poincaré polynomial of `S^d`.
    pub fn sphere(d: usize) -> Self {
        let mut c = vec![0; d + 1];
        c[0] = 1;
        c[d] += 1;
        Self::new(c)
    }

    /// `1 + t^2 + ... + t^{2n}`.
    pub fn projective(n: usize) -> Self {
        let mut c = vec![0; 2 * n + 1];
        for i in 0..=n {
            c[2 * i] = 1;
        }
        Self::new(c)
    }

    /// Gaussian binomial `(n choose k)_q` evaluated at `q = t^2`.
    pub fn gaussian_binomial(n: usize, k: usize) -> Self {
        if k > n {
            return Self::new(vec![0]);
        }
        // rows[j] holds (i choose j)_q for the current i
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for i in 1..=n {
            let mut next = vec![vec![1u64]; i + 1];
            for j in 1..i {
                // (i choose j) = (i-1 choose j-1) + q^j (i-1 choose j)
                let a = &rows[j - 1];
                let b = &rows[j];
                let mut c = vec![0u64; a.len().max(b.len() + j)];
                for (d, x) in a.iter().enumerate() {
                    c[d] += x;
                }
                for (d, x) in b.iter().enumerate() {
                    c[d + j] += x;
                }
                next[j] = c;
            }
            rows = next;
        }
        let q_coeffs = &rows[k];
        let mut c = vec![0; 2 * q_coeffs.len()];
        for (d, x) in q_coeffs.iter().enumerate() {
            c[2 * d] = *x;
        }
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coefficients.get(degree).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Value at `t = 1`: the total rational Betti number.
    pub fn total_betti(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    /// Total reduced Betti number.
    pub fn reduced_betti(&self) -> u64 {
        self.total_betti() - self.coefficient(0)
    }

    /// Value at `t = -1`.
    pub fn euler_characteristic(&self) -> i64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![0u64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        Self::new(
            (0..len)
                .map(|d| self.coefficient(d) + other.coefficient(d))
                .collect(),
        )
    }

    /// Shift every positive-degree class up by one (reduced suspension).
    pub fn suspend(&self) -> Self {
        let mut c = vec![0u64; self.coefficients.len() + 1];
        c[0] = 1;
        for (d, &x) in self.coefficients.iter().enumerate().skip(1) {
            c[d + 1] = x;
        }
        Self::new(c)
    }
}

impl std::fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (d, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (d, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, c) => write!(f, "{c}t")?,
                (d, 1) => write!(f, "t^{d}")?,
                (d, c) => write!(f, "{c}t^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Rational cohomology Poincaré polynomial of a catalog space.
pub fn poincare_polynomial(space: &SpaceId) -> Result<PoincarePolynomial> {
    use SpaceId::*;
    Ok(match space {
        ComplexProjective(n) => PoincarePolynomial::projective(*n as usize),
        Grassmannian { k, n } => PoincarePolynomial::gaussian_binomial(*n as usize, *k as usize),
        // CP^{n-1}-bundle over CP^m; Leray-Hirsch gives the product
        Milnor { m, n } => PoincarePolynomial::projective(*m as usize)
            .mul(&PoincarePolynomial::projective(*n as usize - 1)),
        Unitary(n) => (1..=*n as usize).fold(PoincarePolynomial::one(), |acc, i| {
            acc.mul(&PoincarePolynomial::sphere(2 * i - 1))
        }),
        Sphere(n) => PoincarePolynomial::sphere(*n as usize),
        Wedge(dims) => dims.iter().fold(PoincarePolynomial::one(), |acc, &d| {
            let mut c = acc.coefficients.clone();
            if c.len() <= d as usize {
                c.resize(d as usize + 1, 0);
            }
            c[d as usize] += 1;
            PoincarePolynomial::new(c)
        }),
        // Arnold: prod_{j<k} (1 + j t^{n-1})
        Conf { k, n } => (1..*k as u64).fold(PoincarePolynomial::one(), |acc, j| {
            let mut c = vec![0u64; *n as usize];
            c[0] = 1;
            c[*n as usize - 1] = j;
            acc.mul(&PoincarePolynomial::new(c))
        }),
        SigmaCP2 => PoincarePolynomial::projective(2).suspend(),
        SigmaHP2 => PoincarePolynomial::new(vec![1, 0, 0, 0, 0, 1, 0, 0, 0, 1]),
        other => return Err(NumTheoryError::UnknownSpace(other.to_string())),
    })
}

/// `2^e` compared against `value` without floating point. Negative
/// exponents mean `2^e < 1`, so any positive integer clears them.
pub fn at_least_power_of_two(value: &BigUint, exponent: i64) -> bool {
    if exponent < 0 {
        return !value.is_zero();
    }
    value.bits() > exponent as u64
}

/// `ceil(num / den)` for a positive denominator.
pub fn ceil_div(num: i64, den: i64) -> i64 {
    assert!(den > 0);
    num.div_euclid(den) + if num.rem_euclid(den) == 0 { 0 } else { 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1), Ok(1));
        assert_eq!(mobius(4), Ok(0));
        assert_eq!(mobius(6), Ok(1));
        assert_eq!(mobius(30), Ok(-1));
        assert!(mobius(0).is_err());
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt(2, 1), BigUint::from(2u32));
        assert_eq!(witt(2, 6), BigUint::from(9u32));
        assert_eq!(witt(3, 4), BigUint::from(18u32));
        assert_eq!(witt(1, 1), BigUint::from(1u32));
        assert_eq!(witt(1, 2), BigUint::from(0u32));
        assert!(WittInput::new(0, 3).is_err());
    }

    #[test]
    fn padic_examples() {
        assert_eq!(padic_val(3, 18), Ok(2));
        assert_eq!(padic_val(2, 7), Ok(0));
        assert_eq!(padic_val(5, 250), Ok(3));
        assert_eq!(padic_val(5, -250), Ok(3));
        assert!(padic_val(3, 0).is_err());
    }

    #[test]
    fn adams_m_examples() {
        assert_eq!(adams_m_valuation(3, 4), Ok(1));
        assert_eq!(adams_m_valuation(2, 2), Ok(3));
        assert_eq!(adams_m_valuation(5, 8), Ok(1));
        assert!(matches!(
            adams_m_valuation(5, 6),
            Err(NumTheoryError::Unsupported(_))
        ));
        assert!(adams_m_valuation(3, 3).is_err());
    }

    #[test]
    fn adams_m_hits_r_on_fuel_arguments() {
        for p in [3u64, 5, 7] {
            for r in 1..=3u32 {
                let t = p.pow(r - 1) * (p - 1);
                assert_eq!(adams_m_valuation(p, 2 * t), Ok(r), "p={p} r={r}");
            }
        }
    }

    #[test]
    fn growth_ratio_examples() {
        assert_eq!(witt_growth_ratio(2, 1).unwrap(), BigRational::one());
        assert_eq!(
            witt_growth_ratio(2, 6).unwrap(),
            BigRational::new(27.into(), 32.into())
        );
        let r30 = witt_growth_ratio(2, 30).unwrap();
        assert!(r30 > BigRational::new(999.into(), 1000.into()));
        assert!(r30 < BigRational::one());
        for k in 2..=40 {
            let r = witt_growth_ratio(2, k).unwrap();
            assert!(r >= BigRational::new(1.into(), 2.into()) && r < BigRational::one());
        }
    }

    #[test]
    fn poincare_examples() {
        let cp2 = poincare_polynomial(&SpaceId::ComplexProjective(2)).unwrap();
        assert_eq!(cp2.coefficients(), &[1, 0, 1, 0, 1]);
        let gr = poincare_polynomial(&SpaceId::Grassmannian { k: 2, n: 4 }).unwrap();
        assert_eq!(gr.coefficients(), &[1, 0, 1, 0, 2, 0, 1, 0, 1]);
        let h = poincare_polynomial(&SpaceId::Milnor { m: 2, n: 3 }).unwrap();
        assert_eq!(h.coefficients(), &[1, 0, 2, 0, 3, 0, 2, 0, 1]);
        assert_eq!(h.euler_characteristic(), 9);
        // complex dimension m + n - 1
        assert_eq!(h.top_degree(), 2 * (2 + 3 - 1));
        let u3 = poincare_polynomial(&SpaceId::Unitary(3)).unwrap();
        assert_eq!(u3.coefficients(), &[1, 1, 0, 1, 1, 1, 1, 0, 1, 1]);
        assert_eq!(u3.total_betti(), 8);
        assert!(poincare_polynomial(&SpaceId::PolyhedralProduct).is_err());
    }

    #[test]
    fn gaussian_binomial_symmetry_and_euler() {
        for n in 1..=8usize {
            for k in 0..=n {
                let g = PoincarePolynomial::gaussian_binomial(n, k);
                let h = PoincarePolynomial::gaussian_binomial(n, n - k);
                assert_eq!(g, h);
                let c = g.coefficients();
                let rev: Vec<u64> = c.iter().rev().copied().collect();
                assert_eq!(c, rev.as_slice(), "palindromic");
                let binom = (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1));
                assert_eq!(g.euler_characteristic() as u64, binom);
                assert_eq!(g.top_degree(), 2 * k * (n - k));
            }
        }
    }

    #[test]
    fn power_of_two_comparison() {
        assert!(at_least_power_of_two(&BigUint::from(8u32), 3));
        assert!(!at_least_power_of_two(&BigUint::from(7u32), 3));
        assert!(at_least_power_of_two(&BigUint::from(1u32), -2));
        assert!(!at_least_power_of_two(&BigUint::from(0u32), -2));
        assert!(!at_least_power_of_two(&BigUint::from(0u32), 0));
    }

    #[test]
    fn primes_and_divisors() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-1, 2), 0);
        assert_eq!(ceil_div(8, 4), 2);
    }
}
