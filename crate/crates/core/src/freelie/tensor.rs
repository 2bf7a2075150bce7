use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{hall_basis, BasicProduct, GeneratorSpec};
use crate::linalg::{elementary_divisors, rank_mod_p, IntMatrix};
use crate::numtheory::is_prime;

/// Column-count ceiling for dense tensor expansions.
pub const MAX_TENSOR_COLUMNS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("weight {k} over {n} generators needs {n}^{k} columns, above the dense limit")]
    TooLarge { n: usize, k: usize },
    #[error("integral split-injection check needs even-degree generators")]
    OddGenerators,
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
}

/// Images of the weight-k basic products under `[x, y] ↦ xy − (−1)^{|x||y|} yx`.
///
/// Row `i` is the `i`-th element of `𝓛_k` in Hall order; column `c` is the
/// word whose letters are the base-`n` digits of `c`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorExpansion {
    spec: GeneratorSpec,
    weight: usize,
    labels: Vec<String>,
    rows: Vec<Vec<i64>>,
}

impl TensorExpansion {
    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Canonical bracket strings of the rows.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ncols(&self) -> usize {
        self.spec.len().pow(self.weight as u32)
    }

    /// Rank of the expansion matrix over F_p.
    pub fn rank_mod(&self, p: u64) -> usize {
        rank_mod_p(&self.rows, p)
    }

    /// Whether the embedding stays injective after `⊗ Z/p`, for odd `p`.
    pub fn injective_mod(&self, p: u64) -> Result<bool, TensorError> {
        if p == 2 || !is_prime(p) {
            return Err(TensorError::BadPrime(p));
        }
        Ok(self.rank_mod(p) == self.rows.len())
    }
}

type Word = usize;

fn expand(
    b: BasicProduct<'_>,
    spec: &GeneratorSpec,
    memo: &mut HashMap<usize, Vec<(Word, i64)>>,
) -> Vec<(Word, i64)> {
    if let Some(e) = memo.get(&b.index()) {
        return e.clone();
    }
    let n = spec.len();
    let out = match b.children() {
        None => vec![(b.generator().unwrap(), 1)],
        Some((u, v)) => {
            let eu = expand(u, spec, memo);
            let ev = expand(v, spec, memo);
            let shift_v = n.pow(v.weight() as u32);
            let shift_u = n.pow(u.weight() as u32);
            let odd = (u.degree() % 2 == 1) && (v.degree() % 2 == 1);
            // xy - (-1)^{|x||y|} yx
            let sign: i64 = if odd { 1 } else { -1 };
            let mut acc: HashMap<Word, i64> = HashMap::new();
            for &(wu, cu) in &eu {
                for &(wv, cv) in &ev {
                    *acc.entry(wu * shift_v + wv).or_insert(0) += cu * cv;
                    *acc.entry(wv * shift_u + wu).or_insert(0) += sign * cu * cv;
                }
            }
            let mut terms: Vec<(Word, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
            terms.sort_unstable();
            terms
        }
    };
    memo.insert(b.index(), out.clone());
    out
}

/// Tensor-algebra expansion matrix of `𝓛_k`.
pub fn lie_to_tensor_matrix(spec: &GeneratorSpec, k: usize) -> Result<TensorExpansion, TensorError> {
    let n = spec.len();
    let cols = (n as u128).pow(k as u32);
    if cols > MAX_TENSOR_COLUMNS as u128 {
        return Err(TensorError::TooLarge { n, k });
    }
    let basis = hall_basis(spec, k);
    let mut memo = HashMap::new();
    let mut rows = Vec::with_capacity(basis.count(k));
    let mut labels = Vec::with_capacity(basis.count(k));
    for b in basis.weight(k) {
        let mut row = vec![0i64; cols as usize];
        for (w, c) in expand(b, spec, &mut memo) {
            row[w] = c;
        }
        rows.push(row);
        labels.push(b.to_string());
    }
    Ok(TensorExpansion {
        spec: spec.clone(),
        weight: k,
        labels,
        rows,
    })
}

/// Outcome of the integral split-injection check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInjection {
    /// Injective with image a direct summand of the tensor power.
    pub split: bool,
    /// Nonzero elementary divisors of the expansion matrix.
    pub divisors: Vec<BigInt>,
}

/// Split injectivity over Z via Smith normal form: every elementary
/// divisor must be 1 and there must be one per row.
pub fn verify_split_injection(expansion: &TensorExpansion) -> Result<SplitInjection, TensorError> {
    if !expansion.spec.all_even() {
        return Err(TensorError::OddGenerators);
    }
    let m = IntMatrix::from_rows(&expansion.rows);
    let divisors = elementary_divisors(&m);
    let split = divisors.len() == expansion.rows.len() && divisors.iter().all(One::is_one);
    Ok(SplitInjection { split, divisors })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeadingTermsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("weight {k} exceeds truncation weight {max}")]
    WeightTooLarge { k: usize, max: usize },
}

/// A map `φ: V → T(W)` truncated at weight `max_weight`, given by the
/// images of a basis of `V`: `images[i][w - 1]` holds the coordinates of
/// the weight-`w` component of `φ(v_i)` in `W^{⊗w}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTermsInput {
    pub v_rank: usize,
    pub w_rank: usize,
    pub max_weight: usize,
    pub images: Vec<Vec<Vec<i64>>>,
}

impl LeadingTermsInput {
    fn validate(&self) -> Result<(), LeadingTermsError> {
        let bad = |msg: String| Err(LeadingTermsError::DimensionMismatch(msg));
        if self.images.len() != self.v_rank {
            return bad(format!(
                "{} images for a rank-{} source",
                self.images.len(),
                self.v_rank
            ));
        }
        for (i, img) in self.images.iter().enumerate() {
            if img.len() != self.max_weight {
                return bad(format!(
                    "image {i} has {} components, expected {}",
                    img.len(),
                    self.max_weight
                ));
            }
            for (w, comp) in img.iter().enumerate() {
                let expected = self.w_rank.pow(w as u32 + 1);
                if comp.len() != expected {
                    return bad(format!(
                        "image {i} weight {} has length {}, expected {expected}",
                        w + 1,
                        comp.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

// Element of T(W) truncated at some weight; comps[w - 1] is weight w.
type Truncated = Vec<Vec<BigInt>>;

fn truncated_mul(a: &Truncated, b: &Truncated, w_rank: usize, top: usize) -> Truncated {
    let mut out: Truncated = (1..=top)
        .map(|w| vec![BigInt::zero(); w_rank.pow(w as u32)])
        .collect();
    for (wa, ca) in a.iter().enumerate().map(|(i, c)| (i + 1, c)) {
        for (wb, cb) in b.iter().enumerate().map(|(i, c)| (i + 1, c)) {
            if wa + wb > top {
                continue;
            }
            let stride = w_rank.pow(wb as u32);
            let dst = &mut out[wa + wb - 1];
            for (ia, xa) in ca.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (ib, xb) in cb.iter().enumerate() {
                    if !xb.is_zero() {
                        dst[ia * stride + ib] += xa * xb;
                    }
                }
            }
        }
    }
    out
}

/// Checks `ρ_k ∘ φ̃ ∘ ι_k = ρ_k ∘ (τφ)~ ∘ ι_k` on every basic tensor of
/// `V^{⊗k}`, where `~` is multiplicative extension and `τ` keeps the
/// weight-1 part.
pub fn verify_leading_terms(input: &LeadingTermsInput, k: usize) -> Result<bool, LeadingTermsError> {
    input.validate()?;
    if k == 0 || k > input.max_weight {
        return Err(LeadingTermsError::WeightTooLarge {
            k,
            max: input.max_weight,
        });
    }
    let w_rank = input.w_rank;
    let full: Vec<Truncated> = input
        .images
        .iter()
        .map(|img| {
            img.iter()
                .take(k)
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        })
        .collect();
    let linear: Vec<Truncated> = full
        .iter()
        .map(|img| {
            let mut t = img.clone();
            for comp in t.iter_mut().skip(1) {
                comp.iter_mut().for_each(|x| *x = BigInt::zero());
            }
            t
        })
        .collect();

    let tuples = input.v_rank.pow(k as u32);
    for code in 0..tuples {
        let mut idx = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            idx.push(c % input.v_rank);
            c /= input.v_rank;
        }
        idx.reverse();
        let lhs = idx[1..]
            .iter()
            .fold(full[idx[0]].clone(), |acc, &i| truncated_mul(&acc, &full[i], w_rank, k));
        let rhs = idx[1..]
            .iter()
            .fold(linear[idx[0]].clone(), |acc, &i| {
                truncated_mul(&acc, &linear[i], w_rank, k)
            });
        if lhs[k - 1] != rhs[k - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_two_rows() {
        let even = GeneratorSpec::new(vec![2, 2]).unwrap();
        let e = lie_to_tensor_matrix(&even, 2).unwrap();
        assert_eq!(e.rows(), &[vec![0, 1, -1, 0]]);
        assert_eq!(e.labels(), &["[x1,x2]".to_string()]);

        let odd = GeneratorSpec::new(vec![1, 3]).unwrap();
        let o = lie_to_tensor_matrix(&odd, 2).unwrap();
        assert_eq!(o.rows(), &[vec![0, 1, 1, 0]]);
    }

    #[test]
    fn weight_three_even() {
        let spec = GeneratorSpec::new(vec![2, 4]).unwrap();
        let e = lie_to_tensor_matrix(&spec, 3).unwrap();
        assert_eq!(e.rows().len(), 2);
        assert_eq!(e.ncols(), 8);
        assert_eq!(e.rank_mod(101), 2);
        // [x1,[x1,x2]] = x1x1x2 - 2 x1x2x1 + x2x1x1
        assert_eq!(e.rows()[0], vec![0, 1, -2, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn split_injection_examples() {
        let two = GeneratorSpec::new(vec![2, 2]).unwrap();
        let r = verify_split_injection(&lie_to_tensor_matrix(&two, 2).unwrap()).unwrap();
        assert!(r.split);
        assert_eq!(r.divisors, vec![BigInt::from(1)]);
        let r = verify_split_injection(&lie_to_tensor_matrix(&two, 4).unwrap()).unwrap();
        assert!(r.split);
        assert_eq!(r.divisors.len(), 3);
        let three = GeneratorSpec::new(vec![2, 2, 2]).unwrap();
        let r = verify_split_injection(&lie_to_tensor_matrix(&three, 3).unwrap()).unwrap();
        assert!(r.split && r.divisors.len() == 8);

        let odd = GeneratorSpec::new(vec![1, 2]).unwrap();
        let e = lie_to_tensor_matrix(&odd, 3).unwrap();
        assert_eq!(verify_split_injection(&e), Err(TensorError::OddGenerators));
        assert_eq!(e.injective_mod(3), Ok(true));
        assert_eq!(e.injective_mod(2), Err(TensorError::BadPrime(2)));
    }

    #[test]
    fn too_large_is_refused() {
        let spec = GeneratorSpec::ungraded(4);
        assert_eq!(
            lie_to_tensor_matrix(&spec, 11),
            Err(TensorError::TooLarge { n: 4, k: 11 })
        );
    }

    #[test]
    fn leading_terms_examples() {
        // φ(v) = w, image purely in weight 1
        let linear = LeadingTermsInput {
            v_rank: 1,
            w_rank: 1,
            max_weight: 2,
            images: vec![vec![vec![1], vec![0]]],
        };
        assert_eq!(verify_leading_terms(&linear, 2), Ok(true));
        // φ(v) = w + w⊗w: (w + ww)(w + ww) = ww + 2www + wwww, weight 2 is ww
        let quad = LeadingTermsInput {
            v_rank: 1,
            w_rank: 1,
            max_weight: 2,
            images: vec![vec![vec![1], vec![1]]],
        };
        assert_eq!(verify_leading_terms(&quad, 2), Ok(true));
        assert!(matches!(
            verify_leading_terms(&quad, 3),
            Err(LeadingTermsError::WeightTooLarge { .. })
        ));
        let bad = LeadingTermsInput {
            v_rank: 2,
            w_rank: 1,
            max_weight: 1,
            images: vec![vec![vec![1]]],
        };
        assert!(matches!(
            verify_leading_terms(&bad, 1),
            Err(LeadingTermsError::DimensionMismatch(_))
        ));
    }
}
