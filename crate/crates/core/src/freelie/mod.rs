//! Free graded Lie algebras: Hall bases, multidegree censuses, and the
//! embedding into the tensor algebra.

mod hall;
mod tensor;

pub use hall::{
    graded_witt_total, hall_basis, multidegree_census, multidegree_census_by_formula,
    multidegree_dimension, BasicProduct, BracketTree, HallBasis, ParseBracketError,
};
pub use tensor::{
    lie_to_tensor_matrix, verify_leading_terms, verify_split_injection, LeadingTermsError,
    LeadingTermsInput, SplitInjection, TensorExpansion, TensorError,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorSpecError {
    #[error("generator list is empty")]
    Empty,
    #[error("generator x{index} has degree 0; degrees must be positive")]
    ZeroDegree { index: usize },
}

/// Degrees `(q_1, ..., q_n)` of the generators `x_1, ..., x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    degrees: Vec<u64>,
}

impl GeneratorSpec {
    pub fn new(degrees: Vec<u64>) -> Result<Self, GeneratorSpecError> {
        if degrees.is_empty() {
            return Err(GeneratorSpecError::Empty);
        }
        if let Some(index) = degrees.iter().position(|&d| d == 0) {
            return Err(GeneratorSpecError::ZeroDegree { index: index + 1 });
        }
        Ok(Self { degrees })
    }

    /// `n` generators, all of degree 1.
    pub fn ungraded(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n must be positive")
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_degree(&self) -> u64 {
        *self.degrees.iter().min().unwrap()
    }

    pub fn max_degree(&self) -> u64 {
        *self.degrees.iter().max().unwrap()
    }

    pub fn all_even(&self) -> bool {
        self.degrees.iter().all(|d| d % 2 == 0)
    }

    /// Total degree `Σ k_i q_i` of a multidegree.
    pub fn degree_of(&self, multidegree: &[u32]) -> u64 {
        multidegree
            .iter()
            .zip(&self.degrees)
            .map(|(&k, &q)| k as u64 * q)
            .sum()
    }
}
