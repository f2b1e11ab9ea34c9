//! Finite sections of operators on `H_m` and `H_mⁿ`, stored as sparse
//! columns over the graded monomial basis.
//!
//! A section carries an input window `d_in` (columns `|β| ≤ d_in`), an output
//! window `d_out`, and a degree-shift band `lo ≤ |α| − |β| ≤ hi`. Sections are
//! always built so that `d_out ≥ d_in + hi`: every stored column is the full
//! image of its basis vector, so compositions of sections agree exactly with
//! the infinite-dimensional composition on the input window.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Polynomial, Space};

/// A basis vector of a tuple space: component `comp`, monomial at basis position `idx`.
/// Ordering is component-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub comp: usize,
    pub idx: usize,
}

impl Key {
    pub fn new(comp: usize, idx: usize) -> Self {
        Key { comp, idx }
    }

    pub fn scalar(idx: usize) -> Self {
        Key { comp: 0, idx }
    }
}

/// Bounds `lo ≤ |row| − |col| ≤ hi` on the degree shift of nonzero entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub lo: i64,
    pub hi: i64,
}

impl Band {
    pub fn new(lo: i64, hi: i64) -> Self {
        Band { lo, hi }
    }

    pub fn diagonal() -> Self {
        Band { lo: 0, hi: 0 }
    }

    pub fn contains(&self, shift: i64) -> bool {
        self.lo <= shift && shift <= self.hi
    }

    pub fn hull(&self, other: &Band) -> Band {
        Band {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Summary of a residual operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorReport<R> {
    pub is_zero: bool,
    /// `Σ |t_{αβ}|² ρ(β)/ρ(α)`, the squared Frobenius norm in the orthonormal basis.
    pub frobenius_sq: R,
    pub max_degree_checked: usize,
}

/// Smallest output window that holds every image of a column of degree `≤ d_in`.
pub(crate) fn reach(d_in: usize, hi: i64) -> usize {
    (d_in as i64 + hi).max(0) as usize
}

#[derive(Clone, Debug)]
pub struct GradedOperator<S> {
    space: Arc<Space>,
    arity_in: usize,
    arity_out: usize,
    d_in: usize,
    d_out: usize,
    band: Band,
    cols: BTreeMap<Key, BTreeMap<Key, S>>,
}

impl<S: Scalar> GradedOperator<S> {
    /// An empty section; entries are added with [`GradedOperator::insert`].
    pub fn new(
        space: &Arc<Space>,
        arity_in: usize,
        arity_out: usize,
        d_in: usize,
        d_out: usize,
        band: Band,
    ) -> Result<Self> {
        if arity_in == 0 || arity_out == 0 {
            return Err(Error::ArityMismatch("arities must be at least 1".into()));
        }
        if band.lo > band.hi {
            return Err(Error::InvalidParams(format!(
                "empty band ({}, {})",
                band.lo, band.hi
            )));
        }
        let available = space.max_degree();
        for (what, d) in [("input window", d_in), ("output window", d_out)] {
            if d > available {
                return Err(Error::DegreeOverflow {
                    what: what.into(),
                    needed: d,
                    available,
                });
            }
        }
        if (d_out as i64) < d_in as i64 + band.hi {
            return Err(Error::WindowMismatch(format!(
                "output window {d_out} cannot hold images of degree {} + {}",
                d_in, band.hi
            )));
        }
        Ok(Self::empty(space, arity_in, arity_out, d_in, d_out, band))
    }

    pub(crate) fn empty(
        space: &Arc<Space>,
        arity_in: usize,
        arity_out: usize,
        d_in: usize,
        d_out: usize,
        band: Band,
    ) -> Self {
        GradedOperator {
            space: Arc::clone(space),
            arity_in,
            arity_out,
            d_in,
            d_out,
            band,
            cols: BTreeMap::new(),
        }
    }

    /// The zero map with the tight output window.
    pub fn zero(
        space: &Arc<Space>,
        arity_in: usize,
        arity_out: usize,
        d_in: usize,
    ) -> Result<Self> {
        Self::new(space, arity_in, arity_out, d_in, d_in, Band::diagonal())
    }

    /// Diagonal section whose degree-`k` block is multiplied by `weight(k)`.
    pub fn diagonal(
        space: &Arc<Space>,
        arity: usize,
        d: usize,
        weight: impl Fn(usize) -> S,
    ) -> Result<Self> {
        let mut op = Self::new(space, arity, arity, d, d, Band::diagonal())?;
        for k in 0..=d {
            let w = weight(k);
            if w.is_zero() {
                continue;
            }
            for idx in space.block(k) {
                for comp in 0..arity {
                    let key = Key::new(comp, idx);
                    op.put(key, key, w.clone());
                }
            }
        }
        Ok(op)
    }

    pub fn identity(space: &Arc<Space>, arity: usize, d: usize) -> Result<Self> {
        Self::diagonal(space, arity, d, |_| S::one())
    }

    /// Adds `value` to the entry at `(row, col)` after checking windows and band.
    pub fn insert(&mut self, row: Key, col: Key, value: S) -> Result<()> {
        if row.comp >= self.arity_out || col.comp >= self.arity_in {
            return Err(Error::ArityMismatch(format!(
                "entry component ({}, {}) outside arities ({}, {})",
                row.comp, col.comp, self.arity_out, self.arity_in
            )));
        }
        let dim = self.space.basis().len();
        if row.idx >= dim || col.idx >= dim {
            return Err(Error::DegreeOverflow {
                what: "entry index".into(),
                needed: row.idx.max(col.idx),
                available: dim.saturating_sub(1),
            });
        }
        let (dr, dc) = (self.space.degree_of(row.idx), self.space.degree_of(col.idx));
        if dc > self.d_in {
            return Err(Error::DegreeOverflow {
                what: "column degree".into(),
                needed: dc,
                available: self.d_in,
            });
        }
        if dr > self.d_out {
            return Err(Error::DegreeOverflow {
                what: "row degree".into(),
                needed: dr,
                available: self.d_out,
            });
        }
        let shift = dr as i64 - dc as i64;
        if !self.band.contains(shift) {
            return Err(Error::WindowMismatch(format!(
                "degree shift {shift} outside band ({}, {})",
                self.band.lo, self.band.hi
            )));
        }
        self.put(row, col, value);
        Ok(())
    }

    /// Unchecked accumulation for constructors whose entries are valid by construction.
    pub(crate) fn put(&mut self, row: Key, col: Key, value: S) {
        debug_assert!(col.comp < self.arity_in && row.comp < self.arity_out);
        debug_assert!(self.space.degree_of(col.idx) <= self.d_in);
        debug_assert!(self.space.degree_of(row.idx) <= self.d_out);
        debug_assert!(self
            .band
            .contains(self.space.degree_of(row.idx) as i64 - self.space.degree_of(col.idx) as i64));
        if value.is_zero() {
            return;
        }
        let column = self.cols.entry(col).or_default();
        match column.get_mut(&row) {
            Some(existing) => {
                *existing += value;
                if existing.is_zero() {
                    column.remove(&row);
                    if column.is_empty() {
                        self.cols.remove(&col);
                    }
                }
            }
            None => {
                column.insert(row, value);
            }
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn band(&self) -> Band {
        self.band
    }

    /// Band actually occupied by the stored entries (`(0, 0)` when empty).
    pub fn tight_band(&self) -> Band {
        let mut shifts = self.entries().map(|(r, c, _)| {
            self.space.degree_of(r.idx) as i64 - self.space.degree_of(c.idx) as i64
        });
        match shifts.next() {
            None => Band::diagonal(),
            Some(first) => shifts.fold(Band::new(first, first), |b, s| b.hull(&Band::new(s, s))),
        }
    }

    pub fn entry(&self, row: Key, col: Key) -> Option<&S> {
        self.cols.get(&col).and_then(|c| c.get(&row))
    }

    /// All nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (Key, Key, &S)> {
        self.cols
            .iter()
            .flat_map(|(col, rows)| rows.iter().map(move |(row, v)| (*row, *col, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    /// Image of the basis vector `col`, or an empty slice of entries.
    pub fn column(&self, col: Key) -> impl Iterator<Item = (Key, &S)> {
        self.cols
            .get(&col)
            .into_iter()
            .flat_map(|rows| rows.iter().map(|(k, v)| (*k, v)))
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{:?} vs {:?}",
                self.space.params(),
                other.space.params()
            )))
        }
    }

    /// Matrix–vector product on a tuple of polynomials.
    pub fn apply(&self, input: &[Polynomial<S>]) -> Result<Vec<Polynomial<S>>> {
        if input.len() != self.arity_in {
            return Err(Error::ArityMismatch(format!(
                "operator takes {}-tuples, got {}",
                self.arity_in,
                input.len()
            )));
        }
        let n = self.space.n();
        let mut out: Vec<Polynomial<S>> =
            (0..self.arity_out).map(|_| Polynomial::zero(n)).collect();
        for (comp, p) in input.iter().enumerate() {
            if p.n() != n {
                return Err(Error::InvalidParams(format!(
                    "polynomial in {} variables applied on a space of dimension {n}",
                    p.n()
                )));
            }
            if let Some(deg) = p.degree() {
                if deg > self.d_in {
                    return Err(Error::DegreeOverflow {
                        what: "input polynomial".into(),
                        needed: deg,
                        available: self.d_in,
                    });
                }
            }
            for (alpha, c) in p.terms() {
                let idx = self
                    .space
                    .index_of(alpha)
                    .expect("degree checked against window");
                for (row, v) in self.column(Key::new(comp, idx)) {
                    out[row.comp].add_term(
                        self.space.multi_index(row.idx).clone(),
                        v.clone() * c.clone(),
                    );
                }
            }
        }
        out.into_iter()
            .map(|p| p.with_degree_bound(self.d_out))
            .collect()
    }

    /// Convenience form of [`GradedOperator::apply`] for arity-1 operators.
    pub fn apply_scalar(&self, p: &Polynomial<S>) -> Result<Polynomial<S>> {
        if self.arity_in != 1 || self.arity_out != 1 {
            return Err(Error::ArityMismatch(
                "apply_scalar needs an arity-1 operator".into(),
            ));
        }
        Ok(self.apply(std::slice::from_ref(p))?.remove(0))
    }

    /// `self ∘ inner`. Requires `self.d_in ≥ inner.d_out` so no image of `inner` is cut off.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same_space(inner)?;
        if self.arity_in != inner.arity_out {
            return Err(Error::ArityMismatch(format!(
                "outer operator takes {}-tuples, inner produces {}-tuples",
                self.arity_in, inner.arity_out
            )));
        }
        if self.d_in < inner.d_out {
            return Err(Error::WindowMismatch(format!(
                "outer input window {} is smaller than inner output window {}",
                self.d_in, inner.d_out
            )));
        }
        let band = Band::new(self.band.lo + inner.band.lo, self.band.hi + inner.band.hi);
        let d_out = reach(inner.d_in, band.hi).min(self.d_out);
        let mut out = Self::empty(
            &self.space,
            inner.arity_in,
            self.arity_out,
            inner.d_in,
            d_out,
            band,
        );
        for (col, inner_col) in &inner.cols {
            let mut acc: BTreeMap<Key, S> = BTreeMap::new();
            for (mid, tv) in inner_col {
                let Some(outer_col) = self.cols.get(mid) else {
                    continue;
                };
                for (row, sv) in outer_col {
                    let prod = sv.clone() * tv.clone();
                    match acc.get_mut(row) {
                        Some(e) => *e += prod,
                        None => {
                            acc.insert(*row, prod);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            if !acc.is_empty() {
                out.cols.insert(*col, acc);
            }
        }
        Ok(out)
    }

    /// Adjoint with respect to `⟨f, g⟩ = Σ f_α conj(g_α)/ρ_m(α)`:
    /// `s_{βα} = (ρ(β)/ρ(α))·conj(t_{αβ})`.
    ///
    /// Column `α` of the adjoint is complete only if every `β` with
    /// `|β| ≤ |α| − lo` was a column of `self`, so the result's input window is
    /// `min(d_out, d_in + lo)`.
    pub fn adjoint(&self) -> Result<Self> {
        let trusted = self.d_in as i64 + self.band.lo;
        if trusted < 0 {
            return Err(Error::WindowMismatch(format!(
                "adjoint of a section with input window {} and lower band {} has no complete column",
                self.d_in, self.band.lo
            )));
        }
        let d_in = (trusted as usize).min(self.d_out);
        let band = Band::new(-self.band.hi, -self.band.lo);
        let d_out = reach(d_in, band.hi).min(self.d_in);
        let mut out = Self::empty(
            &self.space,
            self.arity_out,
            self.arity_in,
            d_in,
            d_out,
            band,
        );
        for (row, col, v) in self.entries() {
            if self.space.degree_of(row.idx) > d_in {
                continue;
            }
            let ratio: BigRational = self.space.rho_at(col.idx) / self.space.rho_at(row.idx);
            out.put(col, row, v.conj().scale_real(&ratio));
        }
        Ok(out)
    }

    /// `Σ |t_{αβ}|²·ρ(β)/ρ(α)`.
    pub fn frobenius_sq(&self) -> S::Real {
        let mut acc = S::Real::zero();
        for (row, col, v) in self.entries() {
            let ratio: BigRational = self.space.rho_at(col.idx) / self.space.rho_at(row.idx);
            acc = acc + v.norm_sqr() * S::real_from_rational(&ratio);
        }
        acc
    }

    pub fn report(&self) -> OperatorReport<S::Real> {
        let frobenius_sq = self.frobenius_sq();
        OperatorReport {
            is_zero: S::negligible(&frobenius_sq),
            frobenius_sq,
            max_degree_checked: self.d_in,
        }
    }

    /// Keeps only the columns `|β| ≤ d`.
    pub fn restrict(&self, d: usize) -> Result<Self> {
        if d > self.d_in {
            return Err(Error::DegreeOverflow {
                what: "restriction window".into(),
                needed: d,
                available: self.d_in,
            });
        }
        let d_out = reach(d, self.band.hi).min(self.d_out);
        let mut out = Self::empty(
            &self.space,
            self.arity_in,
            self.arity_out,
            d,
            d_out,
            self.band,
        );
        let limit = self.space.dim_upto(d);
        out.cols = self
            .cols
            .iter()
            .filter(|(col, _)| col.idx < limit)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Ok(out)
    }

    /// Block-diagonal copy of an arity-1 operator on the `copies`-fold tuple space.
    pub fn direct_sum(&self, copies: usize) -> Result<Self> {
        if self.arity_in != 1 || self.arity_out != 1 {
            return Err(Error::ArityMismatch(
                "direct sums are formed from arity-1 operators".into(),
            ));
        }
        let mut out = Self::empty(
            &self.space,
            copies,
            copies,
            self.d_in,
            self.d_out,
            self.band,
        );
        for comp in 0..copies {
            for (col, rows) in &self.cols {
                let rows = rows
                    .iter()
                    .map(|(r, v)| (Key::new(comp, r.idx), v.clone()))
                    .collect();
                out.cols.insert(Key::new(comp, col.idx), rows);
            }
        }
        Ok(out)
    }

    /// `⊕T` on `H_mⁿ`.
    pub fn direct_sum_n(&self) -> Result<Self> {
        self.direct_sum(self.space.n())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::empty(
            &self.space,
            self.arity_in,
            self.arity_out,
            self.d_in,
            self.d_out,
            self.band,
        );
        if s.is_zero() {
            return out;
        }
        for (row, col, v) in self.entries() {
            out.put(row, col, v.clone() * s.clone());
        }
        out
    }

    /// Keeps entries whose degree shift `k` gets `Some(weight)`, multiplied by that weight.
    pub(crate) fn reweight_by_shift(&self, band: Band, weight: impl Fn(i64) -> Option<S>) -> Self {
        let d_out = reach(self.d_in, band.hi).min(self.d_out);
        let mut out = Self::empty(
            &self.space,
            self.arity_in,
            self.arity_out,
            self.d_in,
            d_out,
            band,
        );
        for (row, col, v) in self.entries() {
            let shift = self.space.degree_of(row.idx) as i64 - self.space.degree_of(col.idx) as i64;
            if let Some(w) = weight(shift) {
                out.put(row, col, v.clone() * w);
            }
        }
        out
    }

    /// `self − other` on the common window.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        lincomb(&[S::one(), -S::one()], &[self, other])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        lincomb(&[S::one(), S::one()], &[self, other])
    }

    /// Whether two sections have identical entries (windows and bands are ignored).
    pub fn same_entries(&self, other: &Self) -> bool {
        self.cols == other.cols
    }
}

/// `Σ_k c_k·T_k`. The input window is the smallest one, the band is the hull.
pub fn lincomb<S: Scalar>(coeffs: &[S], ops: &[&GradedOperator<S>]) -> Result<GradedOperator<S>> {
    if coeffs.len() != ops.len() {
        return Err(Error::InvalidParams(format!(
            "{} coefficients for {} operators",
            coeffs.len(),
            ops.len()
        )));
    }
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidParams("empty linear combination".into()))?;
    for op in &ops[1..] {
        first.check_same_space(op)?;
        if op.arity_in != first.arity_in || op.arity_out != first.arity_out {
            return Err(Error::ArityMismatch(format!(
                "cannot combine {}→{} with {}→{}",
                first.arity_in, first.arity_out, op.arity_in, op.arity_out
            )));
        }
    }
    let d_in = ops.iter().map(|op| op.d_in).min().expect("nonempty");
    let band = ops
        .iter()
        .skip(1)
        .fold(first.band, |b, op| b.hull(&op.band));
    let d_out = reach(d_in, band.hi);
    let limit = first.space.dim_upto(d_in);
    let mut out = GradedOperator::empty(
        &first.space,
        first.arity_in,
        first.arity_out,
        d_in,
        d_out,
        band,
    );
    for (c, op) in coeffs.iter().zip(ops) {
        if c.is_zero() {
            continue;
        }
        for (row, col, v) in op.entries() {
            if col.idx < limit {
                out.put(row, col, v.clone() * c.clone());
            }
        }
    }
    Ok(out)
}

/// Report on `restrict(a, d) − restrict(b, d)`.
pub fn residual<S: Scalar>(
    a: &GradedOperator<S>,
    b: &GradedOperator<S>,
    d: usize,
) -> Result<OperatorReport<S::Real>> {
    Ok(a.restrict(d)?.sub(&b.restrict(d)?)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Mode};
    use crate::space::{inner_product, MultiIndex, SpaceParams};

    fn space(n: usize, m: usize, d: usize) -> Arc<Space> {
        Space::new(SpaceParams::new(n, m, d, Mode::Exact).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_rational(&BigRational::new(n.into(), d.into()))
    }

    fn mono(c: &[u32]) -> Polynomial<Exact> {
        Polynomial::monomial(MultiIndex::new(c.to_vec()), q(1, 1))
    }

    /// Multiplication by `z_i` built entry by entry.
    fn shift(sp: &Arc<Space>, i: usize, d_in: usize) -> GradedOperator<Exact> {
        let mut op = GradedOperator::new(sp, 1, 1, d_in, d_in + 1, Band::new(1, 1)).unwrap();
        for idx in 0..sp.dim_upto(d_in) {
            let up = sp.shift_up(i, idx).unwrap();
            op.insert(Key::scalar(up), Key::scalar(idx), q(1, 1))
                .unwrap();
        }
        op
    }

    #[test]
    fn apply_examples() {
        let sp = space(2, 2, 4);
        let zero = GradedOperator::<Exact>::zero(&sp, 1, 1, 3).unwrap();
        assert!(zero.apply_scalar(&mono(&[1, 2])).unwrap().is_zero());
        let id = GradedOperator::<Exact>::identity(&sp, 1, 3).unwrap();
        let p = mono(&[1, 0]).add(&mono(&[0, 2]).scale(&q(-3, 2)));
        assert_eq!(
            id.apply_scalar(&p).unwrap().sub(&p),
            Polynomial::zero(2).with_degree_bound(3).unwrap()
        );
        assert_eq!(
            shift(&sp, 0, 2).apply_scalar(&mono(&[0, 1])).unwrap(),
            mono(&[1, 1]).with_degree_bound(3).unwrap()
        );
        assert!(matches!(
            id.apply_scalar(&mono(&[4, 0])),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let sp = space(2, 1, 5);
        let a = shift(&sp, 0, 3);
        let b = shift(&sp, 1, 3);
        let id = GradedOperator::<Exact>::identity(&sp, 1, 4).unwrap();
        assert!(id.compose(&a).unwrap().same_entries(&a));
        let ab = shift(&sp, 0, 4).compose(&b).unwrap();
        let ba = shift(&sp, 1, 4).compose(&a).unwrap();
        assert!(ab.same_entries(&ba));
        assert_eq!(ab.band(), Band::new(2, 2));
        assert_eq!(ab.d_in(), 3);
        assert!(matches!(a.compose(&b), Err(Error::WindowMismatch(_))));
    }

    #[test]
    fn lincomb_examples() {
        let sp = space(2, 1, 4);
        let t = shift(&sp, 0, 3);
        let cancel = lincomb(&[q(1, 1), q(-1, 1)], &[&t, &t]).unwrap();
        assert!(cancel.is_zero());
        let id = GradedOperator::<Exact>::identity(&sp, 1, 3).unwrap();
        let two = lincomb(&[q(2, 1)], &[&id]).unwrap();
        assert!(two.entries().all(|(r, c, v)| r == c && *v == q(2, 1)));
        assert_eq!(two.nnz(), sp.dim_upto(3));
        let pair = GradedOperator::<Exact>::zero(&sp, 2, 1, 3).unwrap();
        assert!(matches!(
            lincomb(&[q(1, 1), q(1, 1)], &[&id, &pair]),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let sp = space(2, 3, 5);
        let id = GradedOperator::<Exact>::identity(&sp, 1, 4).unwrap();
        assert!(id.adjoint().unwrap().same_entries(&id));
        // Adjoint of z_1: z^α ↦ α_1/(m+|α|−1)·z^{α−e_1}.
        let star = shift(&sp, 0, 3).adjoint().unwrap();
        assert_eq!(star.d_in(), 4);
        let image = star.apply_scalar(&mono(&[2, 1])).unwrap();
        assert_eq!(image.coeff(&MultiIndex::new(vec![1, 1])), q(2, 5));
        assert_eq!(image.len(), 1);
        assert!(star.apply_scalar(&Polynomial::one(2)).unwrap().is_zero());
        assert!(star.adjoint().unwrap().same_entries(&shift(&sp, 0, 3)));
    }

    #[test]
    fn adjoint_is_gram_adjoint_on_basis_vectors() {
        let sp = space(2, 2, 5);
        let t = shift(&sp, 1, 2)
            .add(&GradedOperator::identity(&sp, 1, 3).unwrap().scale(&q(1, 3)))
            .unwrap();
        let ts = t.adjoint().unwrap();
        for beta in 0..sp.dim_upto(t.d_in()) {
            for alpha in 0..sp.dim_upto(ts.d_in()) {
                let p = Polynomial::monomial(sp.multi_index(beta).clone(), q(1, 1));
                let r = Polynomial::monomial(sp.multi_index(alpha).clone(), q(1, 1));
                let lhs = inner_product(&t.apply_scalar(&p).unwrap(), &r, 2);
                let rhs = inner_product(&p, &ts.apply_scalar(&r).unwrap(), 2);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn adjoint_of_uncovered_section_fails() {
        let sp = space(1, 1, 3);
        let down = shift(&sp, 0, 2).adjoint().unwrap().restrict(0).unwrap();
        assert!(matches!(down.adjoint(), Err(Error::WindowMismatch(_))));
    }

    #[test]
    fn frobenius_examples() {
        let sp = space(1, 1, 4);
        assert_eq!(
            GradedOperator::<Exact>::zero(&sp, 1, 1, 3)
                .unwrap()
                .frobenius_sq(),
            BigRational::from_integer(0.into())
        );
        assert_eq!(
            GradedOperator::<Exact>::identity(&sp, 1, 3)
                .unwrap()
                .frobenius_sq(),
            BigRational::from_integer(4.into())
        );
        // Two unit entries t_{1,0}, t_{2,1}; with m = 1 every weight ratio is 1.
        assert_eq!(
            shift(&sp, 0, 1).frobenius_sq(),
            BigRational::from_integer(2.into())
        );
        let t = shift(&sp, 0, 2);
        let doubled = t.direct_sum(3).unwrap();
        assert_eq!(
            doubled.frobenius_sq(),
            t.frobenius_sq() * BigRational::from_integer(3.into())
        );
    }

    #[test]
    fn restrict_examples() {
        let sp = space(2, 1, 6);
        let t = shift(&sp, 0, 5);
        assert!(t.restrict(5).unwrap().same_entries(&t));
        let r = t.restrict(3).unwrap();
        let cols: std::collections::BTreeSet<_> = r.entries().map(|(_, c, _)| c).collect();
        assert_eq!(cols.len(), 10); // binom(2+3, 2)
        assert!(GradedOperator::<Exact>::zero(&sp, 1, 1, 4)
            .unwrap()
            .restrict(2)
            .unwrap()
            .is_zero());
        assert!(matches!(t.restrict(6), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn direct_sum_examples() {
        let sp = space(3, 2, 3);
        assert!(GradedOperator::<Exact>::zero(&sp, 1, 1, 2)
            .unwrap()
            .direct_sum_n()
            .unwrap()
            .is_zero());
        let id = GradedOperator::<Exact>::identity(&sp, 1, 2).unwrap();
        assert!(id
            .direct_sum_n()
            .unwrap()
            .same_entries(&GradedOperator::identity(&sp, 3, 2).unwrap()));
    }

    #[test]
    fn insert_validates() {
        let sp = space(1, 1, 3);
        let mut op = GradedOperator::<Exact>::new(&sp, 1, 1, 2, 3, Band::new(0, 1)).unwrap();
        assert!(op.insert(Key::scalar(3), Key::scalar(1), q(1, 1)).is_err());
        assert!(op.insert(Key::scalar(0), Key::scalar(3), q(1, 1)).is_err());
        assert!(op.insert(Key::new(1, 0), Key::scalar(0), q(1, 1)).is_err());
        assert!(GradedOperator::<Exact>::new(&sp, 1, 1, 3, 3, Band::new(0, 1)).is_err());
    }
}
