//! The multiplication tuple `M_z` on `H_m`, its adjoint, the diagonal
//! operators `δ` and `Δ`, the map `σ(X) = Σ M_{z_i} X M_{z_i}*`, graded
//! projections, homogeneous components, and the two sides of the
//! Brown–Halmos type identity
//!
//! ```text
//! M_z*·δ·T·δ·M_z  =  P (⊕ Σ_{j<m} (−1)^j binom(m, j+1) σ^j(T)) P,   P = P_{Im M_z*}.
//! ```
//!
//! Every constructor takes an input window and returns the section with the
//! tight output window, so compositions never lose entries.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::opcore::{lincomb, reach, Band, GradedOperator, Key, OperatorReport};
use crate::scalar::Scalar;
use crate::space::{binom, MultiIndex, Space};

fn ratio<S: Scalar>(num: usize, den: usize) -> S {
    S::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn check_workspace(space: &Space, what: &str, needed: usize) -> Result<()> {
    if needed > space.max_degree() {
        return Err(Error::DegreeOverflow {
            what: what.into(),
            needed,
            available: space.max_degree(),
        });
    }
    Ok(())
}

fn require_scalar_arity<S: Scalar>(t: &GradedOperator<S>, what: &str) -> Result<()> {
    if t.arity_in() != 1 || t.arity_out() != 1 {
        return Err(Error::ArityMismatch(format!(
            "{what} needs an operator on H_m, got arity {}→{}",
            t.arity_in(),
            t.arity_out()
        )));
    }
    Ok(())
}

/// `M_{z_i}` on `H_m`.
pub fn mz_coord<S: Scalar>(space: &Arc<Space>, i: usize, d_in: usize) -> Result<GradedOperator<S>> {
    check_workspace(space, "multiplication by z_i", d_in + 1)?;
    let mut op = GradedOperator::empty(space, 1, 1, d_in, d_in + 1, Band::new(1, 1));
    for idx in 0..space.dim_upto(d_in) {
        let up = space.shift_up(i, idx).expect("workspace checked");
        op.put(Key::scalar(up), Key::scalar(idx), S::one());
    }
    Ok(op)
}

/// `M_{z_i}*`: `z^α ↦ α_i/(m+|α|−1)·z^{α−e_i}`.
pub fn mz_coord_star<S: Scalar>(
    space: &Arc<Space>,
    i: usize,
    d_in: usize,
) -> Result<GradedOperator<S>> {
    check_workspace(space, "adjoint of z_i", d_in)?;
    let m = space.m();
    let mut op = GradedOperator::empty(space, 1, 1, d_in, reach(d_in, -1), Band::new(-1, -1));
    for idx in 0..space.dim_upto(d_in) {
        if let Some(down) = space.shift_down(i, idx) {
            let alpha = space.multi_index(idx);
            let w = ratio::<S>(alpha.components()[i] as usize, m + alpha.degree() - 1);
            op.put(Key::scalar(down), Key::scalar(idx), w);
        }
    }
    Ok(op)
}

/// Row operator `M_z: H_mⁿ → H_m`, `(f_i) ↦ Σ z_i f_i`.
pub fn mz_row<S: Scalar>(space: &Arc<Space>, d_in: usize) -> Result<GradedOperator<S>> {
    check_workspace(space, "row multiplication", d_in + 1)?;
    let n = space.n();
    let mut op = GradedOperator::empty(space, n, 1, d_in, d_in + 1, Band::new(1, 1));
    for i in 0..n {
        for idx in 0..space.dim_upto(d_in) {
            let up = space.shift_up(i, idx).expect("workspace checked");
            op.put(Key::scalar(up), Key::new(i, idx), S::one());
        }
    }
    Ok(op)
}

/// Column operator `M_z*: H_m → H_mⁿ`, `f ↦ (M_{z_i}* f)_i`.
pub fn mz_star<S: Scalar>(space: &Arc<Space>, d_in: usize) -> Result<GradedOperator<S>> {
    check_workspace(space, "column adjoint", d_in)?;
    let (n, m) = (space.n(), space.m());
    let mut op = GradedOperator::empty(space, 1, n, d_in, reach(d_in, -1), Band::new(-1, -1));
    for idx in 0..space.dim_upto(d_in) {
        let alpha = space.multi_index(idx);
        for i in 0..n {
            if let Some(down) = space.shift_down(i, idx) {
                let w = ratio::<S>(alpha.components()[i] as usize, m + alpha.degree() - 1);
                op.put(Key::new(i, down), Key::scalar(idx), w);
            }
        }
    }
    Ok(op)
}

/// `M_z^γ = Π M_{z_i}^{γ_i}`.
pub fn mz_power<S: Scalar>(
    space: &Arc<Space>,
    gamma: &MultiIndex,
    d_in: usize,
) -> Result<GradedOperator<S>> {
    let mut op = GradedOperator::identity(space, 1, d_in)?;
    for (i, &g) in gamma.components().iter().enumerate() {
        for _ in 0..g {
            op = mz_coord(space, i, op.d_out())?.compose(&op)?;
        }
    }
    Ok(op)
}

/// `δ`: degree-`k` block scaled by `(m+k−1)/k` for `k ≥ 1`, constants fixed.
pub fn delta_op<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    let m = space.m();
    GradedOperator::diagonal(space, 1, d, |k| {
        if k == 0 {
            S::one()
        } else {
            ratio(m + k - 1, k)
        }
    })
}

/// `Δ`: degree-`k` block scaled by `(m+k)/(k+1)`.
pub fn delta_cap<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    let m = space.m();
    GradedOperator::diagonal(space, 1, d, |k| ratio(m + k, k + 1))
}

/// `σ(T) = Σ_i M_{z_i}·T·M_{z_i}*`, on the input window of `T`.
pub fn sigma<S: Scalar>(t: &GradedOperator<S>) -> Result<GradedOperator<S>> {
    require_scalar_arity(t, "sigma")?;
    let space = t.space();
    let needed = reach(t.d_in(), t.band().hi - 1).min(t.d_out()) + 1;
    if needed > space.max_degree() {
        return Err(Error::WindowMismatch(format!(
            "sigma needs workspace degree {needed} but only {} is available",
            space.max_degree()
        )));
    }
    let terms = (0..space.n())
        .map(|i| {
            let inner = t.compose(&mz_coord_star(space, i, t.d_in())?)?;
            mz_coord(space, i, inner.d_out())?.compose(&inner)
        })
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&GradedOperator<S>> = terms.iter().collect();
    let ones = vec![S::one(); refs.len()];
    lincomb(&ones, &refs)
}

/// `σ^j(T)`.
pub fn sigma_pow<S: Scalar>(t: &GradedOperator<S>, j: usize) -> Result<GradedOperator<S>> {
    let mut acc = t.clone();
    for _ in 0..j {
        acc = sigma(&acc)?;
    }
    Ok(acc)
}

/// `(−1)^j·binom(m, j+1)` for `j = 0, …, m−1`.
pub fn alternating_coefficients(m: usize) -> Vec<BigInt> {
    (0..m)
        .map(|j| {
            let c = binom(m, j + 1);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `Σ_{j<m} (−1)^j binom(m, j+1) σ^j(T)`.
pub fn alternating_sigma_sum<S: Scalar>(t: &GradedOperator<S>) -> Result<GradedOperator<S>> {
    let m = t.space().m();
    let mut powers = Vec::with_capacity(m);
    let mut current = t.clone();
    for j in 0..m {
        if j > 0 {
            current = sigma(&current)?;
        }
        powers.push(current.clone());
    }
    let coeffs: Vec<S> = alternating_coefficients(m)
        .into_iter()
        .map(|c| S::from_rational(&BigRational::from_integer(c)))
        .collect();
    let refs: Vec<&GradedOperator<S>> = powers.iter().collect();
    lincomb(&coeffs, &refs)
}

/// `Δ` through its representation `Σ_{j<m} (−1)^j binom(m, j+1) σ^j(1)`.
pub fn delta_cap_via_sigma<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    alternating_sigma_sum(&GradedOperator::identity(space, 1, d)?)
}

/// Pseudo-inverse of `M_z M_z* = Σ_j j/(m+j−1)·P_{H_j}`: inverts each block
/// with `j ≥ 1` and annihilates constants.
pub fn pinv_mz_mz_star<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    let m = space.m();
    GradedOperator::diagonal(space, 1, d, |j| {
        if j == 0 {
            S::zero()
        } else {
            ratio(m + j - 1, j)
        }
    })
}

/// `P_{Im M_z*} = M_z*·pinv(M_z M_z*)·M_z` on `H_mⁿ`.
pub fn proj_im_mz_star<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    if d + 1 > space.max_degree() {
        return Err(Error::WindowMismatch(format!(
            "projection onto Im M_z* on degree {d} needs workspace degree {}",
            d + 1
        )));
    }
    let row = mz_row(space, d)?;
    let middle = pinv_mz_mz_star(space, d + 1)?.compose(&row)?;
    mz_star(space, d + 1)?.compose(&middle)
}

/// `M′_z = δ·M_z`.
pub fn cauchy_dual<S: Scalar>(space: &Arc<Space>, d: usize) -> Result<GradedOperator<S>> {
    if d + 1 > space.max_degree() {
        return Err(Error::WindowMismatch(format!(
            "Cauchy dual on degree {d} needs workspace degree {}",
            d + 1
        )));
    }
    delta_op(space, d + 1)?.compose(&mz_row(space, d)?)
}

/// `P_{H_j}` on the window `d`; zero for `j < 0` or `j > d`.
pub fn graded_projection<S: Scalar>(
    space: &Arc<Space>,
    j: i64,
    d: usize,
) -> Result<GradedOperator<S>> {
    GradedOperator::diagonal(space, 1, d, |k| {
        if k as i64 == j {
            S::one()
        } else {
            S::zero()
        }
    })
}

/// `T_k = Σ_j P_{j+k}·T·P_j`: the entries of `T` that raise degree by exactly `k`.
pub fn homogeneous_component<S: Scalar>(t: &GradedOperator<S>, k: i64) -> GradedOperator<S> {
    t.reweight_by_shift(Band::new(k, k), |shift| (shift == k).then(S::one))
}

/// `Σ_{|k|≤N} (1 − |k|/(N+1))·T_k`.
pub fn fejer_sum<S: Scalar>(t: &GradedOperator<S>, n: usize) -> GradedOperator<S> {
    let band = t.band();
    let cap = n as i64;
    let band = Band::new(
        band.lo.max(-cap).min(band.hi),
        band.hi.min(cap).max(band.lo),
    );
    t.reweight_by_shift(band, |shift| {
        let k = shift.unsigned_abs() as usize;
        (k <= n).then(|| {
            S::from_rational(&BigRational::new(
                BigInt::from(n + 1 - k),
                BigInt::from(n + 1),
            ))
        })
    })
}

/// `M_z*·δ·T·δ·M_z` on tuples of degree `≤ T.d_in − 1`.
pub fn bh_lhs<S: Scalar>(t: &GradedOperator<S>) -> Result<GradedOperator<S>> {
    require_scalar_arity(t, "bh_lhs")?;
    if t.d_in() == 0 {
        return Err(Error::WindowMismatch(
            "the Brown–Halmos identity needs an operator window of at least 1".into(),
        ));
    }
    let space = t.space();
    let right = delta_op(space, t.d_in())?.compose(&mz_row(space, t.d_in() - 1)?)?;
    let middle = t.compose(&right)?;
    let left = mz_star(space, middle.d_out())?.compose(&delta_op(space, middle.d_out())?)?;
    left.compose(&middle)
}

/// `P (⊕ Σ_{j<m} (−1)^j binom(m, j+1) σ^j(T)) P` on tuples of degree `≤ T.d_in − 1`.
pub fn bh_rhs<S: Scalar>(t: &GradedOperator<S>) -> Result<GradedOperator<S>> {
    require_scalar_arity(t, "bh_rhs")?;
    if t.d_in() == 0 {
        return Err(Error::WindowMismatch(
            "the Brown–Halmos identity needs an operator window of at least 1".into(),
        ));
    }
    let space = t.space();
    let inner = alternating_sigma_sum(t)?.direct_sum_n()?;
    let sandwich = inner.compose(&proj_im_mz_star(space, t.d_in() - 1)?)?;
    proj_im_mz_star(space, sandwich.d_out())?.compose(&sandwich)
}

/// Workspace degree needed to evaluate both sides for `T` on trusted window `d`.
pub fn bh_required_degree<S: Scalar>(t: &GradedOperator<S>, d: usize) -> usize {
    (d + 1).max(reach(d, t.band().hi) + 1)
}

/// `restrict(lhs − rhs, d)` for `T` restricted to the input window `d + 1`.
pub fn bh_difference<S: Scalar>(t: &GradedOperator<S>, d: usize) -> Result<GradedOperator<S>> {
    require_scalar_arity(t, "bh_residual")?;
    if t.d_in() < d + 1 {
        return Err(Error::WindowMismatch(format!(
            "operator window {} is too small for the trusted degree {d} (needs {})",
            t.d_in(),
            d + 1
        )));
    }
    let needed = bh_required_degree(t, d);
    if needed > t.space().max_degree() {
        return Err(Error::WindowMismatch(format!(
            "trusted degree {d} needs workspace degree {needed}, but the space stops at {}",
            t.space().max_degree()
        )));
    }
    let t = t.restrict(d + 1)?;
    bh_lhs(&t)?.sub(&bh_rhs(&t)?)?.restrict(d)
}

/// Membership test for the Brown–Halmos class on tuples of degree `≤ d`.
pub fn bh_residual<S: Scalar>(t: &GradedOperator<S>, d: usize) -> Result<OperatorReport<S::Real>> {
    Ok(bh_difference(t, d)?.report())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowersReport<R> {
    /// Residual for `M_z^γ`.
    pub power: OperatorReport<R>,
    /// Residual for `M_z^{*γ}`.
    pub adjoint_power: OperatorReport<R>,
}

impl<R> PowersReport<R> {
    pub fn is_zero(&self) -> bool {
        self.power.is_zero && self.adjoint_power.is_zero
    }
}

/// Brown–Halmos residuals of `M_z^γ` and `M_z^{*γ}` on the trusted window `d`.
pub fn verify_powers<S: Scalar>(
    space: &Arc<Space>,
    gamma: &MultiIndex,
    d: usize,
) -> Result<PowersReport<S::Real>> {
    let power = mz_power::<S>(space, gamma, d + 1)?;
    let adjoint = power.adjoint()?;
    Ok(PowersReport {
        power: bh_residual(&power, d)?,
        adjoint_power: bh_residual(&adjoint, d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::residual;
    use crate::scalar::{Exact, Mode};
    use crate::space::{gamma, homogeneous_indices, Polynomial, SpaceParams};

    fn space(n: usize, m: usize, d: usize) -> Arc<Space> {
        Space::new(SpaceParams::new(n, m, d, Mode::Exact).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_rational(&BigRational::new(n.into(), d.into()))
    }

    fn mono(c: &[u32]) -> Polynomial<Exact> {
        Polynomial::monomial(MultiIndex::new(c.to_vec()), q(1, 1))
    }

    fn assert_zero(r: OperatorReport<BigRational>) {
        assert!(r.is_zero, "residual {:?}", r.frobenius_sq);
    }

    #[test]
    fn row_and_column_examples() {
        let sp = space(3, 2, 4);
        let row = mz_row::<Exact>(&sp, 2).unwrap();
        let e1 = vec![Polynomial::one(3), Polynomial::zero(3), Polynomial::zero(3)];
        assert_eq!(
            row.apply(&e1).unwrap()[0],
            mono(&[1, 0, 0]).with_degree_bound(3).unwrap()
        );
        let col = mz_star::<Exact>(&sp, 3).unwrap();
        assert!(col
            .apply_scalar_tuple(&Polynomial::one(3))
            .iter()
            .all(Polynomial::is_zero));
        assert!(col
            .adjoint()
            .unwrap()
            .restrict(2)
            .unwrap()
            .same_entries(&row));
        assert!(row.adjoint().unwrap().same_entries(&col));
    }

    trait ApplyTuple {
        fn apply_scalar_tuple(&self, p: &Polynomial<Exact>) -> Vec<Polynomial<Exact>>;
    }

    impl ApplyTuple for GradedOperator<Exact> {
        fn apply_scalar_tuple(&self, p: &Polynomial<Exact>) -> Vec<Polynomial<Exact>> {
            self.apply(std::slice::from_ref(p)).unwrap()
        }
    }

    #[test]
    fn column_adjoint_weight_example() {
        // n = 2, m = 1: α_1/(m+|α|−1) = 1/2 for α = (1,1).
        let sp = space(2, 1, 3);
        let out = mz_star::<Exact>(&sp, 2)
            .unwrap()
            .apply_scalar_tuple(&mono(&[1, 1]));
        assert_eq!(
            out[0],
            mono(&[0, 1]).scale(&q(1, 2)).with_degree_bound(1).unwrap()
        );
    }

    #[test]
    fn row_image_is_functions_vanishing_at_origin() {
        let sp = space(2, 3, 4);
        let row = mz_row::<Exact>(&sp, 2).unwrap();
        let reached: std::collections::BTreeSet<Key> = row.entries().map(|(r, _, _)| r).collect();
        let expected: std::collections::BTreeSet<Key> =
            (1..sp.dim_upto(3)).map(Key::scalar).collect();
        assert_eq!(reached, expected);
    }

    #[test]
    fn row_times_column_is_graded_weight() {
        for (n, m) in [(1, 1), (2, 3), (3, 2)] {
            let sp = space(n, m, 6);
            let mm = mz_row::<Exact>(&sp, 4)
                .unwrap()
                .compose(&mz_star(&sp, 5).unwrap())
                .unwrap();
            for idx in 0..sp.dim_upto(5) {
                let k = sp.degree_of(idx);
                let expected = if k == 0 {
                    None
                } else {
                    Some(q(k as i64, (m + k - 1) as i64))
                };
                assert_eq!(
                    mm.entry(Key::scalar(idx), Key::scalar(idx)).cloned(),
                    expected
                );
            }
            assert_eq!(mm.nnz(), sp.dim_upto(5) - 1);
        }
    }

    #[test]
    fn diagonal_weight_examples() {
        let sp1 = space(2, 1, 5);
        assert!(delta_op::<Exact>(&sp1, 5)
            .unwrap()
            .same_entries(&GradedOperator::identity(&sp1, 1, 5).unwrap()));
        assert!(delta_cap::<Exact>(&sp1, 5)
            .unwrap()
            .same_entries(&GradedOperator::identity(&sp1, 1, 5).unwrap()));
        let sp3 = space(1, 3, 4);
        let d = delta_op::<Exact>(&sp3, 4).unwrap();
        assert_eq!(d.entry(Key::scalar(0), Key::scalar(0)), Some(&q(1, 1)));
        assert_eq!(d.entry(Key::scalar(2), Key::scalar(2)), Some(&q(2, 1)));
        let sp2 = space(1, 2, 4);
        assert_eq!(
            delta_cap::<Exact>(&sp2, 3)
                .unwrap()
                .entry(Key::scalar(0), Key::scalar(0)),
            Some(&q(2, 1))
        );
        let sp4 = space(1, 4, 4);
        assert_eq!(
            delta_cap::<Exact>(&sp4, 3)
                .unwrap()
                .entry(Key::scalar(3), Key::scalar(3)),
            Some(&q(7, 4))
        );
    }

    #[test]
    fn sigma_examples() {
        let sp = space(2, 3, 6);
        let zero = GradedOperator::<Exact>::zero(&sp, 1, 1, 4).unwrap();
        assert!(sigma(&zero).unwrap().is_zero());
        let s = sigma(&GradedOperator::<Exact>::identity(&sp, 1, 4).unwrap()).unwrap();
        for idx in 0..sp.dim_upto(4) {
            let k = sp.degree_of(idx);
            let expected = (k > 0).then(|| q(k as i64, (3 + k - 1) as i64));
            assert_eq!(
                s.entry(Key::scalar(idx), Key::scalar(idx)).cloned(),
                expected
            );
        }
        let sp1 = space(1, 2, 6);
        let s1 = sigma(&GradedOperator::<Exact>::identity(&sp1, 1, 4).unwrap()).unwrap();
        let direct = mz_coord::<Exact>(&sp1, 0, 3)
            .unwrap()
            .compose(&mz_coord_star(&sp1, 0, 4).unwrap())
            .unwrap();
        assert!(s1.same_entries(&direct));
        assert!(sigma_pow(&s1, 0).unwrap().same_entries(&s1));
    }

    /// `Σ_{|α|=j} γ_α M^α T M^{*α}`, built from coordinate products.
    fn multinomial_form(t: &GradedOperator<Exact>, j: usize) -> GradedOperator<Exact> {
        let sp = t.space();
        let mut acc = GradedOperator::zero(sp, 1, 1, t.d_in()).unwrap();
        for alpha in homogeneous_indices(sp.n(), j) {
            let star = mz_power::<Exact>(sp, &alpha, t.d_in() - j)
                .unwrap()
                .adjoint()
                .unwrap();
            let inner = t.compose(&star.restrict(t.d_in()).unwrap()).unwrap();
            let outer = mz_power::<Exact>(sp, &alpha, inner.d_out())
                .unwrap()
                .compose(&inner)
                .unwrap();
            let g = Exact::from_rational(&BigRational::from_integer(gamma(&alpha)));
            acc = lincomb(&[q(1, 1), g], &[&acc, &outer]).unwrap();
        }
        acc
    }

    #[test]
    fn sigma_power_matches_multinomial_form() {
        for (n, m) in [(2, 1), (2, 3), (3, 2)] {
            let sp = space(n, m, 8);
            let id = GradedOperator::<Exact>::identity(&sp, 1, 4).unwrap();
            let t = mz_coord::<Exact>(&sp, 0, 4)
                .unwrap()
                .restrict(4)
                .unwrap()
                .add(&id)
                .unwrap();
            for j in 0..=2 {
                let lhs = sigma_pow(&t, j).unwrap();
                let rhs = multinomial_form(&t, j);
                assert_zero(residual(&lhs, &rhs, 4 - j).unwrap());
            }
        }
    }

    #[test]
    fn alternating_coefficients_for_m3() {
        assert_eq!(
            alternating_coefficients(3),
            vec![BigInt::from(3), BigInt::from(-3), BigInt::from(1)]
        );
        assert_eq!(alternating_coefficients(1), vec![BigInt::from(1)]);
    }

    #[test]
    fn delta_representation() {
        for n in 1..=3 {
            for m in 1..=4 {
                let sp = space(n, m, 9);
                let via = delta_cap_via_sigma::<Exact>(&sp, 8).unwrap();
                assert!(via.same_entries(&delta_cap(&sp, 8).unwrap()), "n={n} m={m}");
            }
        }
        // m = 2, n = 1: 2 − k/(k+1) = (k+2)/(k+1).
        let sp = space(1, 2, 6);
        let via = delta_cap_via_sigma::<Exact>(&sp, 5).unwrap();
        for k in 0..=5usize {
            assert_eq!(
                via.entry(Key::scalar(k), Key::scalar(k)),
                Some(&q(k as i64 + 2, k as i64 + 1))
            );
        }
    }

    #[test]
    fn projection_examples() {
        let sp1 = space(1, 3, 6);
        let p1 = proj_im_mz_star::<Exact>(&sp1, 5).unwrap();
        assert!(p1.same_entries(&GradedOperator::identity(&sp1, 1, 5).unwrap()));
        let sp = space(3, 2, 6);
        let p = proj_im_mz_star::<Exact>(&sp, 4).unwrap();
        assert!(p.compose(&p).unwrap().same_entries(&p));
        assert!(p.adjoint().unwrap().same_entries(&p));
        let col = mz_star::<Exact>(&sp, 5).unwrap();
        assert!(p.compose(&col).unwrap().same_entries(&col));
    }

    #[test]
    fn cauchy_dual_identities() {
        let sp1 = space(2, 1, 5);
        assert!(cauchy_dual::<Exact>(&sp1, 3)
            .unwrap()
            .same_entries(&mz_row(&sp1, 3).unwrap()));
        for (n, m) in [(2, 2), (3, 4)] {
            let sp = space(n, m, 7);
            let d = 4;
            // M_z*·δ solves the normal equation (M_z* M_z) x = M_z* f.
            let x = mz_star::<Exact>(&sp, d + 1)
                .unwrap()
                .compose(&delta_op(&sp, d + 1).unwrap())
                .unwrap();
            let gram = mz_star::<Exact>(&sp, d + 1)
                .unwrap()
                .compose(&mz_row(&sp, d).unwrap())
                .unwrap();
            let lhs = gram.compose(&x).unwrap();
            assert!(lhs.same_entries(&mz_star(&sp, d + 1).unwrap()));
            // δ M_z M_z* = I − P_{H_0}.
            let ext = cauchy_dual::<Exact>(&sp, d)
                .unwrap()
                .compose(&mz_star(&sp, d + 1).unwrap())
                .unwrap();
            let expected = GradedOperator::identity(&sp, 1, d + 1)
                .unwrap()
                .sub(&graded_projection(&sp, 0, d + 1).unwrap())
                .unwrap();
            assert!(ext.same_entries(&expected));
        }
    }

    #[test]
    fn graded_projection_examples() {
        let sp = space(2, 2, 4);
        let parts: Vec<_> = (0..=3)
            .map(|j| graded_projection::<Exact>(&sp, j, 3).unwrap())
            .collect();
        let refs: Vec<_> = parts.iter().collect();
        let sum = lincomb(&vec![q(1, 1); 4], &refs).unwrap();
        assert!(sum.same_entries(&GradedOperator::identity(&sp, 1, 3).unwrap()));
        assert!(parts[1].compose(&parts[2]).unwrap().is_zero());
        assert_eq!(
            parts[1]
                .apply_scalar(&mono(&[1, 0]))
                .unwrap()
                .coeff(&MultiIndex::new(vec![1, 0])),
            q(1, 1)
        );
        assert!(parts[1].apply_scalar(&mono(&[2, 0])).unwrap().is_zero());
        assert!(graded_projection::<Exact>(&sp, -1, 3).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_component_examples() {
        let sp = space(2, 2, 6);
        let t = mz_coord::<Exact>(&sp, 0, 4).unwrap();
        assert!(homogeneous_component(&t, 1).same_entries(&t));
        assert!(homogeneous_component(&t, 0).is_zero());
        assert!(homogeneous_component(&t, -1).is_zero());
        let d = delta_op::<Exact>(&sp, 4).unwrap();
        assert!(homogeneous_component(&d, 0).same_entries(&d));
        let g = mz_star::<Exact>(&sp, 5)
            .unwrap()
            .compose(&mz_row(&sp, 4).unwrap())
            .unwrap();
        assert!(homogeneous_component(&g, 0).same_entries(&g));
        assert_eq!(homogeneous_component(&g, 0).band(), Band::new(0, 0));
    }

    #[test]
    fn fejer_examples() {
        let sp = space(2, 2, 6);
        let d = delta_op::<Exact>(&sp, 4).unwrap();
        assert!(fejer_sum(&d, 0).same_entries(&d));
        assert!(fejer_sum(&d, 3).same_entries(&d));
        let t = mz_coord::<Exact>(&sp, 0, 4).unwrap();
        assert!(fejer_sum(&t, 1).same_entries(&t.scale(&q(1, 2))));
        assert!(fejer_sum(&t, 0).is_zero());
    }

    #[test]
    fn classical_case_is_shift_isometry() {
        let sp = space(1, 1, 6);
        let id = GradedOperator::<Exact>::identity(&sp, 1, 4).unwrap();
        let lhs = bh_lhs(&id).unwrap();
        assert!(lhs.same_entries(&GradedOperator::identity(&sp, 1, 3).unwrap()));
        assert_zero(bh_residual(&id, 3).unwrap());
        assert_zero(bh_residual(&GradedOperator::<Exact>::zero(&sp, 1, 1, 4).unwrap(), 3).unwrap());
    }

    #[test]
    fn constant_projection_fails_identity() {
        for (n, m) in [(1, 1), (2, 2), (3, 4)] {
            let sp = space(n, m, 7);
            let p0 = graded_projection::<Exact>(&sp, 0, 4).unwrap();
            let r = bh_residual(&p0, 3).unwrap();
            assert!(!r.is_zero, "n={n} m={m}");
        }
    }

    #[test]
    fn powers_satisfy_identity() {
        let sp = space(1, 1, 6);
        assert!(verify_powers::<Exact>(&sp, &MultiIndex::zeros(1), 3)
            .unwrap()
            .is_zero());
        let sp = space(2, 2, 8);
        assert!(verify_powers::<Exact>(&sp, &MultiIndex::unit(2, 0), 3)
            .unwrap()
            .is_zero());
        let sp = space(2, 3, 9);
        assert!(verify_powers::<Exact>(&sp, &MultiIndex::new(vec![1, 1]), 3)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn small_windows_are_rejected() {
        let sp = space(2, 2, 4);
        let id = GradedOperator::<Exact>::identity(&sp, 1, 2).unwrap();
        assert!(matches!(bh_residual(&id, 2), Err(Error::WindowMismatch(_))));
        let pair = GradedOperator::<Exact>::identity(&sp, 2, 2).unwrap();
        assert!(matches!(
            bh_residual(&pair, 1),
            Err(Error::ArityMismatch(_))
        ));
    }
}
