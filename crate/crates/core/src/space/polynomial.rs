use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::{binom, rho, MultiIndex};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finitely supported coefficient map `α ↦ f_α`. Zero coefficients are never stored.
/// Equality ignores the declared degree bound.
#[derive(Clone, Debug)]
pub struct Polynomial<S> {
    n: usize,
    degree_bound: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: PartialEq> PartialEq for Polynomial<S> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            degree_bound: 0,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(MultiIndex::zeros(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    pub fn monomial(alpha: MultiIndex, c: S) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// The coordinate function `z_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), S::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            if alpha.dim() != n {
                return Err(Error::InvalidParams(format!(
                    "multi-index {alpha} has {} components, expected {n}",
                    alpha.dim()
                )));
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Raises the declared bound; the bound never drops below the actual degree.
    pub fn with_degree_bound(mut self, bound: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > bound {
                return Err(Error::DegreeOverflow {
                    what: "polynomial".into(),
                    needed: d,
                    available: bound,
                });
            }
        }
        self.degree_bound = bound;
        Ok(self)
    }

    /// Adds `c·z^α`, dropping the term if it cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, c: S) {
        debug_assert_eq!(alpha.dim(), self.n);
        self.degree_bound = self.degree_bound.max(alpha.degree());
        match self.coeffs.get_mut(&alpha) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.coeffs.remove(&alpha);
                }
            }
            None => {
                if !c.is_zero() {
                    self.coeffs.insert(alpha, c);
                }
            }
        }
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> S {
        self.coeffs.get(alpha).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Actual degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::degree).max()
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::degree).min()
    }

    pub fn value_at_origin(&self) -> S {
        self.coeff(&MultiIndex::zeros(self.n))
    }

    /// Degree-`k` homogeneous part `f_k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (a, c) in self.coeffs.iter().filter(|(a, _)| a.degree() == k) {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.n);
        out.degree_bound = self.degree_bound;
        for (a, c) in &self.coeffs {
            out.add_term(a.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Coefficientwise conjugate.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.conj();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        out.degree_bound = self.degree_bound.max(other.degree_bound);
        for (a, c) in &other.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a.add(b), ca.clone() * cb.clone());
            }
        }
        out.degree_bound = out.degree_bound.max(self.degree_bound + other.degree_bound);
        out
    }
}

/// `⟨f, g⟩ = Σ_α f_α·conj(g_α)/ρ_m(α)`.
pub fn inner_product<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>, m: usize) -> S {
    let mut acc = S::zero();
    for (alpha, fa) in f.terms() {
        if let Some(ga) = g.coeffs.get(alpha) {
            let inv = BigRational::one() / rho(m, alpha);
            acc += (fa.clone() * ga.conj()).scale_real(&inv);
        }
    }
    acc
}

fn power<S: Scalar>(x: &S, k: u32) -> S {
    let mut acc = S::one();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

/// `f(z) = Σ_α f_α z^α`.
pub fn eval<S: Scalar>(f: &Polynomial<S>, z: &[S]) -> S {
    assert_eq!(z.len(), f.n(), "point has the wrong number of coordinates");
    let mut acc = S::zero();
    for (alpha, c) in f.terms() {
        let mono = alpha
            .components()
            .iter()
            .zip(z)
            .fold(S::one(), |acc, (&a, zi)| acc * power(zi, a));
        acc += c.clone() * mono;
    }
    acc
}

/// Degree-`≤ D` partial sum `Σ_{k≤D} binom(m+k−1,k)·⟨z,w⟩^k` of the kernel.
pub fn kernel_truncated<S: Scalar>(m: usize, z: &[S], w: &[S], max_degree: usize) -> S {
    assert_eq!(z.len(), w.len(), "points of different dimension");
    let pairing = z
        .iter()
        .zip(w)
        .fold(S::zero(), |acc, (zi, wi)| acc + zi.clone() * wi.conj());
    let mut acc = S::zero();
    let mut pow = S::one();
    for k in 0..=max_degree {
        let c = BigRational::from_integer(binom(m + k - 1, k));
        acc += pow.scale_real(&c);
        pow = pow * pairing.clone();
    }
    acc
}

/// The truncated kernel `z ↦ Σ_{k≤D} binom(m+k−1,k)·⟨z,w⟩^k` expanded as a
/// polynomial in `z`, by repeated multiplication with the linear form
/// `Σ_i conj(w_i) z_i`.
pub fn kernel_polynomial<S: Scalar>(m: usize, w: &[S], max_degree: usize) -> Polynomial<S> {
    let n = w.len();
    let linear = Polynomial::from_terms(
        n,
        w.iter()
            .enumerate()
            .map(|(i, wi)| (MultiIndex::unit(n, i), wi.conj())),
    )
    .expect("unit indices have the right dimension");
    let mut out = Polynomial::zero(n);
    let mut pow = Polynomial::one(n);
    for k in 0..=max_degree {
        let c = S::from_rational(&BigRational::from_integer(binom(m + k - 1, k)));
        out = out.add(&pow.scale(&c));
        pow = pow.mul(&linear);
    }
    out.degree_bound = max_degree;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_rational(&BigRational::new(n.into(), d.into()))
    }

    fn mono(c: &[u32]) -> Polynomial<Exact> {
        Polynomial::monomial(MultiIndex::new(c.to_vec()), q(1, 1))
    }

    #[test]
    fn inner_product_examples() {
        let one = Polynomial::<Exact>::one(2);
        assert_eq!(inner_product(&one, &one, 3), q(1, 1));
        assert_eq!(inner_product(&mono(&[1, 0]), &mono(&[0, 1]), 2), q(0, 1));
        assert_eq!(inner_product(&mono(&[1, 1]), &mono(&[1, 1]), 2), q(1, 6));
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_slot() {
        let i = Exact::from_parts(&BigRational::from_integer(0.into()), &BigRational::one());
        let f = mono(&[1, 0]).scale(&i);
        let ip = inner_product(&f, &mono(&[1, 0]), 1);
        assert_eq!(ip, i);
        assert_eq!(inner_product(&mono(&[1, 0]), &f, 1), i.conj());
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(
            eval(&Polynomial::<Exact>::one(3), &[q(5, 1), q(1, 2), q(0, 1)]),
            q(1, 1)
        );
        assert_eq!(eval(&mono(&[1, 1]), &[q(1, 1), q(2, 1)]), q(2, 1));
        assert_eq!(eval(&mono(&[2]), &[q(3, 2)]), q(9, 4));
    }

    #[test]
    fn truncated_kernel_examples() {
        assert_eq!(
            kernel_truncated(3, &[q(1, 3), q(2, 1)], &[q(0, 1), q(0, 1)], 5),
            q(1, 1)
        );
        // 1 + 1/4 + 1/16 + 1/64, summed by hand.
        assert_eq!(kernel_truncated(1, &[q(1, 2)], &[q(1, 2)], 3), q(85, 64));
    }

    #[test]
    fn kernel_polynomial_agrees_with_scalar_sum() {
        let w = [q(1, 3), q(-2, 5)];
        let z = [q(3, 7), q(1, 2)];
        let k = kernel_polynomial(2, &w, 4);
        assert_eq!(eval(&k, &z), kernel_truncated(2, &z, &w, 4));
    }

    #[test]
    fn arithmetic_keeps_support_clean() {
        let p = mono(&[1, 0]).add(&mono(&[0, 1]));
        let zero = p.sub(&p);
        assert!(zero.is_zero());
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(&MultiIndex::new(vec![1, 1])), q(2, 1));
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(sq.homogeneous_part(2).len(), 3);
    }
}
