//! Seeded generation of test symbols, polynomials and points.
//!
//! Coefficients are rationals `a/b` with `a ∈ [−9, 9]` and `b ∈ [1, 4]`, drawn
//! from a SplitMix64 stream. The stream does not depend on the scalar mode, so
//! exact and float runs see the same data.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::scalar::Scalar;
use crate::space::{basis_enumerate, Polynomial};
use crate::toeplitz::PluriharmonicSymbol;

pub type CaseRng = SplitMix64;

/// Independent stream for one test case, derived from the run seed and a tag.
pub fn case_rng(seed: u64, tag: &[u64]) -> CaseRng {
    let mut state = SplitMix64::seed_from_u64(seed);
    let mut mixed: u64 = state.gen();
    for &t in tag {
        state = SplitMix64::seed_from_u64(mixed ^ t);
        mixed = state.gen();
    }
    SplitMix64::seed_from_u64(mixed)
}

pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    let a: i64 = rng.gen_range(-9..=9);
    let b: i64 = rng.gen_range(1..=4);
    BigRational::new(a.into(), b.into())
}

pub fn random_scalar<S: Scalar>(rng: &mut impl Rng) -> S {
    let re = random_rational(rng);
    let im = random_rational(rng);
    S::from_parts(&re, &im)
}

/// Each monomial of degree `≤ max_degree` appears with probability 1/2.
pub fn random_polynomial<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    max_degree: usize,
) -> Polynomial<S> {
    let mut p = Polynomial::zero(n);
    for alpha in basis_enumerate(n, max_degree) {
        if rng.gen_bool(0.5) {
            p.add_term(alpha, random_scalar(rng));
        }
    }
    p
}

/// Monomials of degree exactly `degree`, each present with probability 1/2.
pub fn random_homogeneous<S: Scalar>(rng: &mut impl Rng, n: usize, degree: usize) -> Polynomial<S> {
    let mut p = Polynomial::zero(n);
    for alpha in crate::space::homogeneous_indices(n, degree) {
        if rng.gen_bool(0.5) {
            p.add_term(alpha, random_scalar(rng));
        }
    }
    p
}

pub fn random_symbol<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    max_degree: usize,
) -> PluriharmonicSymbol<S> {
    let g = random_polynomial(rng, n, max_degree);
    let h = random_polynomial(rng, n, max_degree);
    PluriharmonicSymbol { g, h }
}

pub fn random_point<S: Scalar>(rng: &mut impl Rng, n: usize) -> Vec<S> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Float};

    #[test]
    fn streams_are_reproducible() {
        let a: PluriharmonicSymbol<Exact> = random_symbol(&mut case_rng(7, &[2, 3, 1]), 2, 3);
        let b: PluriharmonicSymbol<Exact> = random_symbol(&mut case_rng(7, &[2, 3, 1]), 2, 3);
        let c: PluriharmonicSymbol<Exact> = random_symbol(&mut case_rng(7, &[2, 3, 2]), 2, 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn modes_share_the_stream() {
        let e: Polynomial<Exact> = random_polynomial(&mut case_rng(1, &[5]), 3, 3);
        let f: Polynomial<Float> = random_polynomial(&mut case_rng(1, &[5]), 3, 3);
        assert_eq!(e.len(), f.len());
        for ((ae, ce), (af, cf)) in e.terms().zip(f.terms()) {
            assert_eq!(ae, af);
            assert_eq!(ce.to_float(), *cf);
        }
    }

    #[test]
    fn coefficients_stay_in_range() {
        let mut rng = case_rng(99, &[]);
        for _ in 0..500 {
            let r = random_rational(&mut rng);
            assert!(r.denom() <= &4.into() && r.numer().magnitude() <= &9u32.into());
        }
    }
}
