//! The weighted monomial basis of `H_m` on the unit ball of `ℂⁿ`.
//!
//! `‖z^α‖² = 1/ρ_m(α)` with `ρ_m(α) = (m+|α|−1)! / (α! (m−1)!)`, so monomials
//! are orthogonal and every operator is stored against the graded-lex
//! monomial basis truncated at a workspace degree.

mod multi_index;
mod polynomial;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::One;

pub use multi_index::{homogeneous_indices, MultiIndex};
pub use polynomial::{eval, inner_product, kernel_polynomial, kernel_truncated, Polynomial};

use crate::error::{Error, Result};
use crate::scalar::Mode;
use multi_index::factorial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    /// Complex dimension of the ball.
    pub n: usize,
    /// Kernel exponent in `(1 − ⟨z,w⟩)^{−m}`.
    pub m: usize,
    /// Workspace truncation degree `D`.
    pub max_degree: usize,
    pub mode: Mode,
}

impl SpaceParams {
    pub fn new(n: usize, m: usize, max_degree: usize, mode: Mode) -> Result<Self> {
        let params = SpaceParams {
            n,
            m,
            max_degree,
            mode,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams(
                "dimension n must be at least 1".into(),
            ));
        }
        if self.m == 0 {
            return Err(Error::InvalidParams(
                "kernel exponent m must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Every exponent vector with `|α| ≤ max_degree`, in increasing graded-lex order.
pub fn basis_enumerate(n: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|k| homogeneous_indices(n, k))
        .collect()
}

/// `ρ_m(α)`, built up one unit step at a time via
/// `ρ_m(α + e_i) = ρ_m(α)·(m+|α|)/(α_i+1)`.
pub fn rho(m: usize, alpha: &MultiIndex) -> BigRational {
    let mut value = BigRational::one();
    let mut degree = 0usize;
    for &a in alpha.components() {
        for step in 0..a as usize {
            value *= BigRational::new(BigInt::from(m + degree), BigInt::from(step + 1));
            degree += 1;
        }
    }
    value
}

/// `γ_α = |α|!/α!`.
pub fn gamma(alpha: &MultiIndex) -> BigInt {
    factorial(alpha.degree()) / alpha.factorial()
}

/// `binom(n, k)` as a big integer.
pub fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    binomial(BigInt::from(n), BigInt::from(k))
}

/// `ρ_m` on every basis position of a [`Space`].
#[derive(Clone, Debug)]
pub struct WeightTable {
    weights: Vec<BigRational>,
}

impl WeightTable {
    fn build(m: usize, basis: &[MultiIndex], index: &HashMap<MultiIndex, usize>) -> Self {
        let mut weights: Vec<BigRational> = Vec::with_capacity(basis.len());
        for alpha in basis {
            let w = match alpha.components().iter().position(|&a| a > 0) {
                None => BigRational::one(),
                Some(i) => {
                    let parent = alpha.decremented(i).expect("positive component");
                    let prev = &weights[index[&parent]];
                    prev * BigRational::new(
                        BigInt::from(m + parent.degree()),
                        BigInt::from(alpha.components()[i]),
                    )
                }
            };
            weights.push(w);
        }
        WeightTable { weights }
    }

    pub fn get(&self, idx: usize) -> &BigRational {
        &self.weights[idx]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Basis, weights and shift tables for one `(n, m, D)`.
///
/// Because the order is graded, the basis for any window `d ≤ D` is the prefix
/// of length `binom(n+d, n)`.
#[derive(Debug)]
pub struct Space {
    params: SpaceParams,
    basis: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    degrees: Vec<usize>,
    /// `offsets[k]` is the position of the first degree-`k` monomial; `offsets[D+1]` is the total.
    offsets: Vec<usize>,
    weights: WeightTable,
    up: Vec<Vec<Option<usize>>>,
    down: Vec<Vec<Option<usize>>>,
}

impl Space {
    pub fn new(params: SpaceParams) -> Result<Arc<Self>> {
        params.validate()?;
        let SpaceParams {
            n, m, max_degree, ..
        } = params;
        let basis = basis_enumerate(n, max_degree);
        let index: HashMap<MultiIndex, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let degrees: Vec<usize> = basis.iter().map(MultiIndex::degree).collect();
        let mut offsets = vec![0usize; max_degree + 2];
        for &d in &degrees {
            offsets[d + 1] += 1;
        }
        for k in 1..offsets.len() {
            offsets[k] += offsets[k - 1];
        }
        let weights = WeightTable::build(m, &basis, &index);
        let up = (0..n)
            .map(|i| {
                basis
                    .iter()
                    .map(|a| index.get(&a.incremented(i)).copied())
                    .collect()
            })
            .collect();
        let down = (0..n)
            .map(|i| {
                basis
                    .iter()
                    .map(|a| a.decremented(i).map(|b| index[&b]))
                    .collect()
            })
            .collect();
        Ok(Arc::new(Space {
            params,
            basis,
            index,
            degrees,
            offsets,
            weights,
            up,
            down,
        }))
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn max_degree(&self) -> usize {
        self.params.max_degree
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn multi_index(&self, idx: usize) -> &MultiIndex {
        &self.basis[idx]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.degrees[idx]
    }

    /// Number of basis monomials of degree `≤ d`.
    pub fn dim_upto(&self, d: usize) -> usize {
        self.offsets[d.min(self.params.max_degree) + 1]
    }

    /// Basis positions of the degree-`k` block.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.params.max_degree {
            return 0..0;
        }
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    /// `ρ_m` at basis position `idx`.
    pub fn rho_at(&self, idx: usize) -> &BigRational {
        self.weights.get(idx)
    }

    /// Position of `α + e_i`, if it lies in the workspace.
    pub fn shift_up(&self, i: usize, idx: usize) -> Option<usize> {
        self.up[i][idx]
    }

    /// Position of `α − e_i`, if `α_i > 0`.
    pub fn shift_down(&self, i: usize, idx: usize) -> Option<usize> {
        self.down[i][idx]
    }

    pub(crate) fn same_as(&self, other: &Space) -> bool {
        std::ptr::eq(self, other) || self.params == other.params
    }
}
