//! Toeplitz operators `T_f p = T_g p + T_h* p` with pluriharmonic polynomial
//! symbol `f = g + conj(h)`, symbol recovery, and the classifier that combines
//! the Brown–Halmos residual with recovery.

use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hmops::{bh_residual, homogeneous_component};
use crate::opcore::{lincomb, residual, Band, GradedOperator, Key, OperatorReport};
use crate::scalar::Scalar;
use crate::space::{Polynomial, Space};

/// `f = g + conj(h)`. The canonical representative has `g(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PluriharmonicSymbol<S> {
    pub g: Polynomial<S>,
    pub h: Polynomial<S>,
}

impl<S: Scalar> PluriharmonicSymbol<S> {
    pub fn new(g: Polynomial<S>, h: Polynomial<S>) -> Result<Self> {
        if g.n() != h.n() {
            return Err(Error::InvalidParams(format!(
                "analytic part has {} variables, co-analytic part {}",
                g.n(),
                h.n()
            )));
        }
        Ok(PluriharmonicSymbol { g, h })
    }

    pub fn zero(n: usize) -> Self {
        PluriharmonicSymbol {
            g: Polynomial::zero(n),
            h: Polynomial::zero(n),
        }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// Moves the constant term of `g` into `h`: `(g − g(0), h + conj(g(0)))`.
    pub fn canonicalize(&self) -> Self {
        let n = self.n();
        let c = self.g.value_at_origin();
        PluriharmonicSymbol {
            g: self.g.sub(&Polynomial::constant(n, c.clone())),
            h: self.h.add(&Polynomial::constant(n, c.conj())),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.g.value_at_origin().is_zero()
    }

    /// Largest degree in either part.
    pub fn degree(&self) -> usize {
        self.g
            .degree()
            .unwrap_or(0)
            .max(self.h.degree().unwrap_or(0))
    }
}

fn check_dimension<S: Scalar>(p: &Polynomial<S>, space: &Space) -> Result<()> {
    if p.n() != space.n() {
        return Err(Error::InvalidParams(format!(
            "symbol in {} variables on a space of dimension {}",
            p.n(),
            space.n()
        )));
    }
    Ok(())
}

/// Multiplication by `g` on columns of degree `≤ d_in`.
pub fn analytic_toeplitz<S: Scalar>(
    g: &Polynomial<S>,
    space: &Arc<Space>,
    d_in: usize,
) -> Result<GradedOperator<S>> {
    check_dimension(g, space)?;
    let (lo, hi) = match (g.lowest_degree(), g.degree()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => (0, 0),
    };
    if d_in + hi > space.max_degree() {
        return Err(Error::DegreeOverflow {
            what: "analytic Toeplitz image".into(),
            needed: d_in + hi,
            available: space.max_degree(),
        });
    }
    let mut op = GradedOperator::empty(
        space,
        1,
        1,
        d_in,
        d_in + hi,
        Band::new(lo as i64, hi as i64),
    );
    for col in 0..space.dim_upto(d_in) {
        let beta = space.multi_index(col);
        for (alpha, c) in g.terms() {
            let row = space.index_of(&beta.add(alpha)).expect("degree checked");
            op.put(Key::scalar(row), Key::scalar(col), c.clone());
        }
    }
    Ok(op)
}

/// `T_h*`: `z^α ↦ Σ_{β≤α} (ρ(α−β)/ρ(α))·conj(h_β)·z^{α−β}`.
pub fn coanalytic_toeplitz<S: Scalar>(
    h: &Polynomial<S>,
    space: &Arc<Space>,
    d_in: usize,
) -> Result<GradedOperator<S>> {
    check_dimension(h, space)?;
    if d_in > space.max_degree() {
        return Err(Error::DegreeOverflow {
            what: "co-analytic Toeplitz window".into(),
            needed: d_in,
            available: space.max_degree(),
        });
    }
    let deg = h.degree().unwrap_or(0) as i64;
    let mut op = GradedOperator::empty(space, 1, 1, d_in, d_in, Band::new(-deg, 0));
    for col in 0..space.dim_upto(d_in) {
        let alpha = space.multi_index(col);
        for (beta, c) in h.terms() {
            let Some(rest) = alpha.checked_sub(beta) else {
                continue;
            };
            let row = space
                .index_of(&rest)
                .expect("smaller index lies in the basis");
            let w: BigRational = space.rho_at(row) / space.rho_at(col);
            op.put(Key::scalar(row), Key::scalar(col), c.conj().scale_real(&w));
        }
    }
    Ok(op)
}

/// `T_f = T_g + T_h*`.
pub fn toeplitz_op<S: Scalar>(
    symbol: &PluriharmonicSymbol<S>,
    space: &Arc<Space>,
    d_in: usize,
) -> Result<GradedOperator<S>> {
    let analytic = analytic_toeplitz(&symbol.g, space, d_in)?;
    let coanalytic = coanalytic_toeplitz(&symbol.h, space, d_in)?;
    lincomb(&[S::one(), S::one()], &[&analytic, &coanalytic])
}

/// `g = (T − T_0)(1)` and `h = T*(1)`; the result is canonical.
pub fn recover_symbol<S: Scalar>(t: &GradedOperator<S>) -> Result<PluriharmonicSymbol<S>> {
    if t.arity_in() != 1 || t.arity_out() != 1 {
        return Err(Error::ArityMismatch(
            "symbols are recovered from operators on H_m".into(),
        ));
    }
    let n = t.space().n();
    let one = Polynomial::one(n);
    let off_diagonal = t.sub(&homogeneous_component(t, 0))?;
    let g = off_diagonal.apply_scalar(&one)?;
    let h = t.adjoint()?.apply_scalar(&one)?;
    Ok(PluriharmonicSymbol { g, h })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ToeplitzPluriharmonic,
    NotToeplitz,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ToeplitzPluriharmonic => "ToeplitzPluriharmonic",
            Verdict::NotToeplitz => "NotToeplitz",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport<S: Scalar> {
    pub bh: OperatorReport<S::Real>,
    /// Present exactly when the Brown–Halmos residual vanishes.
    pub symbol: Option<PluriharmonicSymbol<S>>,
    /// Residual of `T − T_f` for the recovered symbol on the trusted window.
    pub toeplitz_match: OperatorReport<S::Real>,
    pub verdict: Verdict,
}

/// Runs the Brown–Halmos test on the trusted window `d`, recovers the symbol,
/// and compares `T` with the Toeplitz operator of that symbol.
pub fn classify<S: Scalar>(t: &GradedOperator<S>, d: usize) -> Result<ClassificationReport<S>> {
    let bh = bh_residual(t, d)?;
    let recovered = recover_symbol(t)?;
    let rebuilt = toeplitz_op(&recovered, t.space(), d)?;
    let toeplitz_match = residual(t, &rebuilt, d)?;
    let verdict = if bh.is_zero && toeplitz_match.is_zero {
        Verdict::ToeplitzPluriharmonic
    } else {
        Verdict::NotToeplitz
    };
    Ok(ClassificationReport {
        symbol: bh.is_zero.then_some(recovered),
        bh,
        toeplitz_match,
        verdict,
    })
}

/// Residual of `T − M_{T(1)}` on the input window of `T`. Zero exactly when
/// `T` acts as multiplication by its value at `1`.
pub fn multiplication_defect<S: Scalar>(t: &GradedOperator<S>) -> Result<OperatorReport<S::Real>> {
    let q = t.apply_scalar(&Polynomial::one(t.space().n()))?;
    let mult = analytic_toeplitz(&q, t.space(), t.d_in())?;
    residual(t, &mult, t.d_in())
}
