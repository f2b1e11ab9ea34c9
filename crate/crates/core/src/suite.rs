//! The identity suite behind `pluritop verify`.
//!
//! Each case yields named checks. Cases run on the rayon pool and come back in
//! submission order, so a report depends only on the configuration and seed.

use std::sync::Arc;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hmops::{
    bh_difference, bh_residual, bh_rhs, cauchy_dual, delta_cap, delta_cap_via_sigma, delta_op,
    fejer_sum, graded_projection, homogeneous_component, mz_row, mz_star, proj_im_mz_star,
    verify_powers,
};
use crate::opcore::{lincomb, residual, GradedOperator, OperatorReport};
use crate::random::{case_rng, random_point, random_polynomial, random_symbol};
use crate::scalar::Scalar;
use crate::space::{
    basis_enumerate, eval, inner_product, kernel_polynomial, Polynomial, Space, SpaceParams,
};
use crate::toeplitz::{
    classify, multiplication_defect, recover_symbol, toeplitz_op, PluriharmonicSymbol, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Forward,
    Recovery,
    Powers,
    Structural,
    Negative,
    Reduction,
    Homogeneous,
    Kernel,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Forward => "forward",
            Group::Recovery => "recovery",
            Group::Powers => "powers",
            Group::Structural => "structural",
            Group::Negative => "negative",
            Group::Reduction => "reduction",
            Group::Homogeneous => "homogeneous",
            Group::Kernel => "kernel",
        }
    }
}

/// One named identity. `frobenius_sq` is the residual measure in wire format.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub group: Group,
    pub name: String,
    /// `false` for negative controls, which must leave a nonzero residual.
    pub expect_zero: bool,
    pub is_zero: bool,
    pub frobenius_sq: String,
    pub frobenius_f64: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.is_zero == self.expect_zero
    }

    fn from_report<S: Scalar>(
        group: Group,
        name: impl Into<String>,
        r: &OperatorReport<S::Real>,
    ) -> Self {
        Check {
            group,
            name: name.into(),
            expect_zero: true,
            is_zero: r.is_zero,
            frobenius_sq: S::real_to_string(&r.frobenius_sq),
            frobenius_f64: S::real_to_f64(&r.frobenius_sq),
        }
    }

    fn from_measure<S: Scalar>(group: Group, name: impl Into<String>, value: &S::Real) -> Self {
        Check {
            group,
            name: name.into(),
            expect_zero: true,
            is_zero: S::negligible(value),
            frobenius_sq: S::real_to_string(value),
            frobenius_f64: S::real_to_f64(value),
        }
    }

    fn expecting_nonzero(mut self) -> Self {
        self.expect_zero = false;
        self
    }

    /// Marks the check failed regardless of its residual.
    fn force_fail(mut self) -> Self {
        self.is_zero = !self.expect_zero;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub m: usize,
    /// Trusted window for every identity.
    pub degree: usize,
    pub seed: u64,
    pub cases: usize,
    pub symbol_degree: usize,
    pub kernel_pairs: usize,
    pub max_power: usize,
}

impl SuiteConfig {
    pub fn new(n: usize, m: usize, degree: usize, seed: u64) -> Result<Self> {
        let cfg = SuiteConfig {
            n,
            m,
            degree,
            seed,
            cases: 5,
            symbol_degree: 3,
            kernel_pairs: 20,
            max_power: 2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        Ok(())
    }

    /// Workspace degree `D = degree + 4 + m`.
    pub fn workspace(&self) -> usize {
        self.degree + 4 + self.m
    }

    fn space<S: Scalar>(&self) -> Result<Arc<Space>> {
        let needed = self.degree + 2 + self.symbol_degree.max(self.max_power);
        let d = self.workspace().max(needed);
        Space::new(SpaceParams::new(self.n, self.m, d, S::MODE)?)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub mode: crate::scalar::Mode,
    pub workspace: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

type Task<'a> = Box<dyn FnOnce() -> Result<Vec<Check>> + Send + 'a>;

/// Runs every group on the current rayon pool.
pub fn run_suite<S: Scalar>(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let sp = cfg.space::<S>()?;
    let mut tasks: Vec<Task> = Vec::new();
    for case in 0..cfg.cases {
        let sp = Arc::clone(&sp);
        tasks.push(Box::new(move || symbol_case::<S>(cfg, &sp, case)));
    }
    {
        let sp = Arc::clone(&sp);
        tasks.push(Box::new(move || {
            power_checks::<S>(&sp, cfg.degree, cfg.max_power)
        }));
    }
    {
        let sp = Arc::clone(&sp);
        tasks.push(Box::new(move || structural_checks::<S>(&sp, cfg.degree)));
    }
    {
        let sp = Arc::clone(&sp);
        tasks.push(Box::new(move || negative_projection::<S>(&sp, cfg.degree)));
    }
    for pair in 0..cfg.kernel_pairs {
        let sp = Arc::clone(&sp);
        tasks.push(Box::new(move || {
            kernel_check::<S>(&sp, cfg.seed, pair).map(|c| vec![c])
        }));
    }
    let results: Vec<Result<Vec<Check>>> = tasks.into_par_iter().map(|t| t()).collect();
    let mut checks = Vec::new();
    for r in results {
        checks.extend(r?);
    }
    Ok(SuiteReport {
        config: cfg.clone(),
        mode: S::MODE,
        workspace: sp.max_degree(),
        checks,
    })
}

/// The `case`-th seeded symbol of a run.
pub fn suite_symbol<S: Scalar>(cfg: &SuiteConfig, case: usize) -> PluriharmonicSymbol<S> {
    let mut rng = case_rng(cfg.seed, &[cfg.n as u64, cfg.m as u64, case as u64]);
    random_symbol(&mut rng, cfg.n, cfg.symbol_degree)
}

/// Squared coefficient distance between two symbols.
pub fn symbol_distance<S: Scalar>(
    a: &PluriharmonicSymbol<S>,
    b: &PluriharmonicSymbol<S>,
) -> S::Real {
    let sq = |p: &Polynomial<S>, q: &Polynomial<S>| {
        p.sub(q).terms().fold(
            S::real_from_rational(&BigRational::from_integer(0.into())),
            |acc, (_, c)| acc + c.norm_sqr(),
        )
    };
    sq(&a.g, &b.g) + sq(&a.h, &b.h)
}

/// Checks driven by one random symbol: forward direction, recovery,
/// classification, reductions, the homogeneous machinery and a negative control.
fn symbol_case<S: Scalar>(cfg: &SuiteConfig, sp: &Arc<Space>, case: usize) -> Result<Vec<Check>> {
    let d = cfg.degree;
    let s = suite_symbol::<S>(cfg, case);
    let t = toeplitz_op(&s, sp, d + 1)?;
    let tag = |what: &str| format!("{what}/case{case}");
    let mut out = Vec::new();

    let bh = bh_residual(&t, d)?;
    out.push(Check::from_report::<S>(
        Group::Forward,
        tag("forward_direction"),
        &bh,
    ));

    let recovered = recover_symbol(&t)?;
    let dist = symbol_distance(&recovered, &s.canonicalize());
    out.push(Check::from_measure::<S>(
        Group::Recovery,
        tag("recovery"),
        &dist,
    ));

    let report = classify(&t, d)?;
    let mut c = Check::from_report::<S>(
        Group::Recovery,
        tag("classify_match"),
        &report.toeplitz_match,
    );
    if report.verdict != Verdict::ToeplitzPluriharmonic {
        c = c.force_fail();
    }
    out.push(c);

    let p0 = graded_projection::<S>(sp, 0, d + 1)?;
    let perturbed = t.add(&p0)?;
    let report = classify(&perturbed, d)?;
    let mut c =
        Check::from_report::<S>(Group::Negative, tag("toeplitz_plus_projection"), &report.bh)
            .expecting_nonzero();
    if report.verdict != Verdict::NotToeplitz {
        c = c.force_fail();
    }
    out.push(c);

    if sp.m() == 1 {
        out.push(Check::from_report::<S>(
            Group::Reduction,
            tag("m1_projection_form"),
            &m1_reduction(&t, d)?,
        ));
    }
    if sp.n() == 1 && sp.m() == 1 {
        out.push(Check::from_report::<S>(
            Group::Reduction,
            tag("classical Brown-Halmos"),
            &classical_reduction(&t, d)?,
        ));
    }

    out.extend(homogeneous_checks(&t, d, &tag)?);
    Ok(out)
}

/// For `m = 1`: `bh_rhs(T) = P(⊕T)P`.
pub fn m1_reduction<S: Scalar>(t: &GradedOperator<S>, d: usize) -> Result<OperatorReport<S::Real>> {
    let sp = t.space();
    let t = t.restrict(d + 1)?;
    let sum = t.direct_sum_n()?;
    let inner = proj_im_mz_star::<S>(sp, d + 1)?;
    let outer = proj_im_mz_star::<S>(sp, sum.d_out())?;
    let direct = outer.compose(&sum.compose(&inner)?)?;
    residual(&bh_rhs(&t)?, &direct, d)
}

/// For `n = m = 1`: `M_z*·T·M_z − T` coincides with the Brown–Halmos difference.
pub fn classical_reduction<S: Scalar>(
    t: &GradedOperator<S>,
    d: usize,
) -> Result<OperatorReport<S::Real>> {
    let sp = t.space();
    let inner = t.restrict(d + 1)?.compose(&mz_row(sp, d)?)?;
    let classical = mz_star::<S>(sp, inner.d_out())?
        .compose(&inner)?
        .sub(&t.restrict(d)?)?;
    residual(&classical, &bh_difference(t, d)?, d)
}

fn merge<S: Scalar>(
    reports: impl IntoIterator<Item = OperatorReport<S::Real>>,
    d: usize,
) -> OperatorReport<S::Real> {
    let mut total = S::real_from_rational(&BigRational::from_integer(0.into()));
    let mut all_zero = true;
    for r in reports {
        all_zero &= r.is_zero;
        total = total + r.frobenius_sq;
    }
    OperatorReport {
        is_zero: all_zero,
        frobenius_sq: total,
        max_degree_checked: d,
    }
}

/// Component completeness, adjoint symmetry, inheritance of the identity by
/// components, the multiplication property, and Fejér convergence.
pub fn homogeneous_checks<S: Scalar>(
    t: &GradedOperator<S>,
    d: usize,
    tag: &dyn Fn(&str) -> String,
) -> Result<Vec<Check>> {
    let band = t.band();
    let w = t.d_in();
    let comps: Vec<(i64, GradedOperator<S>)> = (band.lo..=band.hi)
        .map(|k| (k, homogeneous_component(t, k)))
        .collect();
    let mut out = Vec::new();

    let refs: Vec<&GradedOperator<S>> = comps.iter().map(|(_, c)| c).collect();
    let ones = vec![S::one(); refs.len()];
    let total = lincomb(&ones, &refs)?;
    let outside = [band.lo - 1, band.hi + 1].map(|k| homogeneous_component(t, k).report());
    out.push(Check::from_report::<S>(
        Group::Homogeneous,
        tag("component_sum"),
        &merge::<S>([residual(&total, t, w)?].into_iter().chain(outside), w),
    ));

    let adj = t.adjoint()?;
    let mut sym = Vec::new();
    for (k, tk) in &comps {
        let lhs = homogeneous_component(&adj, -k);
        let rhs = tk.adjoint()?;
        sym.push(residual(&lhs, &rhs, lhs.d_in().min(rhs.d_in()))?);
    }
    out.push(Check::from_report::<S>(
        Group::Homogeneous,
        tag("component_adjoint"),
        &merge::<S>(sym, w),
    ));

    let inherited = comps
        .iter()
        .map(|(_, tk)| bh_residual(tk, d))
        .collect::<Result<Vec<_>>>()?;
    out.push(Check::from_report::<S>(
        Group::Homogeneous,
        tag("component_inheritance"),
        &merge::<S>(inherited, d),
    ));

    let mult = comps
        .iter()
        .filter(|(k, _)| *k >= 0)
        .map(|(_, tk)| multiplication_defect(tk))
        .collect::<Result<Vec<_>>>()?;
    out.push(Check::from_report::<S>(
        Group::Homogeneous,
        tag("component_multiplier"),
        &merge::<S>(mult, w),
    ));

    out.push(fejer_check(t, &comps, tag("fejer")));
    Ok(out)
}

/// `‖fejer_sum(T, N) − T‖²` must match `Σ_k (1 − w_k(N))²‖T_k‖²` for each `N`
/// and never increase. The sampled `N` run past the band up to `10·window`.
fn fejer_check<S: Scalar>(
    t: &GradedOperator<S>,
    comps: &[(i64, GradedOperator<S>)],
    name: String,
) -> Check {
    let zero = S::real_from_rational(&BigRational::from_integer(0.into()));
    let width = comps
        .iter()
        .map(|(k, _)| k.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let mut ns: Vec<usize> = (0..=width + 2).collect();
    ns.push(10 * t.d_out().max(1));
    let norms: Vec<(usize, S::Real)> = comps
        .iter()
        .map(|(k, c)| (k.unsigned_abs() as usize, c.frobenius_sq()))
        .collect();
    let mut defect = zero.clone();
    let mut monotone = true;
    let mut previous: Option<S::Real> = None;
    for &n in &ns {
        let err = fejer_sum(t, n).sub(t).expect("same space").frobenius_sq();
        let expected = norms.iter().fold(zero.clone(), |acc, (k, f)| {
            let miss = if *k > n {
                BigRational::from_integer(1.into())
            } else {
                BigRational::new((*k).into(), (n + 1).into())
            };
            let miss = S::real_from_rational(&(&miss * &miss));
            acc + miss * f.clone()
        });
        let diff = err.clone() - expected;
        defect = defect + diff.clone() * diff;
        if let Some(prev) = &previous {
            let slack = if S::negligible(&(err.clone() - prev.clone())) {
                zero.clone()
            } else {
                err.clone() - prev.clone()
            };
            monotone &= slack <= zero;
        }
        previous = Some(err);
    }
    let check = Check::from_measure::<S>(Group::Homogeneous, name, &defect);
    if monotone {
        check
    } else {
        check.force_fail()
    }
}

/// Powers of the shift and their adjoints for every `|γ| ≤ max_power`.
pub fn power_checks<S: Scalar>(sp: &Arc<Space>, d: usize, max_power: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for gamma in basis_enumerate(sp.n(), max_power) {
        let r = verify_powers::<S>(sp, &gamma, d)?;
        let label = format!("{:?}", gamma.components());
        out.push(Check::from_report::<S>(
            Group::Powers,
            format!("power/gamma={label}"),
            &r.power,
        ));
        out.push(Check::from_report::<S>(
            Group::Powers,
            format!("power_adjoint/gamma={label}"),
            &r.adjoint_power,
        ));
    }
    Ok(out)
}

/// Identities among the shift, its adjoint, `δ`, `Δ`, `σ` and the projections.
pub fn structural_checks<S: Scalar>(sp: &Arc<Space>, d: usize) -> Result<Vec<Check>> {
    let m = sp.m();
    let mut out = Vec::new();
    let mut push = |name: &str, r: OperatorReport<S::Real>| {
        out.push(Check::from_report::<S>(
            Group::Structural,
            format!("structural/{name}"),
            &r,
        ));
    };

    push(
        "delta_representation",
        residual(&delta_cap_via_sigma::<S>(sp, d)?, &delta_cap(sp, d)?, d)?,
    );

    let lhs = delta_op::<S>(sp, d + 1)?.compose(&mz_row(sp, d)?)?;
    let rhs = mz_row::<S>(sp, d)?.compose(&delta_cap(sp, d)?.direct_sum_n()?)?;
    push("intertwining", residual(&lhs, &rhs, d)?);

    let gram = mz_row::<S>(sp, d)?.compose(&mz_star(sp, d + 1)?)?;
    let parts = (0..=d + 1)
        .map(|j| graded_projection::<S>(sp, j as i64, d + 1))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<S> = (0..=d + 1)
        .map(|j| {
            if j == 0 {
                S::zero()
            } else {
                S::from_rational(&BigRational::new(j.into(), (m + j - 1).into()))
            }
        })
        .collect();
    let graded = lincomb(&weights, &parts.iter().collect::<Vec<_>>())?;
    push("row_column_product", residual(&gram, &graded, d + 1)?);

    let p = proj_im_mz_star::<S>(sp, d)?;
    push("projection_idempotent", residual(&p.compose(&p)?, &p, d)?);
    push("projection_self_adjoint", residual(&p.adjoint()?, &p, d)?);
    let col = mz_star::<S>(sp, d + 1)?;
    push(
        "projection_fixes_range",
        residual(&p.compose(&col)?, &col, d + 1)?,
    );

    let x = mz_star::<S>(sp, d + 1)?.compose(&delta_op(sp, d + 1)?)?;
    let normal = mz_star::<S>(sp, d + 1)?
        .compose(&mz_row(sp, d)?)?
        .compose(&x)?;
    push(
        "normal_equation",
        residual(&normal, &mz_star(sp, d + 1)?, d + 1)?,
    );

    let ext = cauchy_dual::<S>(sp, d)?.compose(&mz_star(sp, d + 1)?)?;
    let expected =
        GradedOperator::identity(sp, 1, d + 1)?.sub(&graded_projection(sp, 0, d + 1)?)?;
    push("range_projection", residual(&ext, &expected, d + 1)?);
    Ok(out)
}

/// `P_{H_0}` must fail the Brown–Halmos test.
pub fn negative_projection<S: Scalar>(sp: &Arc<Space>, d: usize) -> Result<Vec<Check>> {
    let p0 = graded_projection::<S>(sp, 0, d + 1)?;
    let report = classify(&p0, d)?;
    let mut c = Check::from_report::<S>(Group::Negative, "negative/projection_h0", &report.bh)
        .expecting_nonzero();
    if report.verdict != Verdict::NotToeplitz || report.symbol.is_some() {
        c = c.force_fail();
    }
    Ok(vec![c])
}

/// `⟨p, K(·, w)⟩ = p(w)` for a seeded pair, with `deg p` up to the workspace degree.
/// The measure is the squared error relative to `1 + |p(w)|²`.
pub fn kernel_check<S: Scalar>(sp: &Arc<Space>, seed: u64, pair: usize) -> Result<Check> {
    let (n, m, top) = (sp.n(), sp.m(), sp.max_degree());
    let mut rng = case_rng(seed, &[n as u64, m as u64, 1 << 32 | pair as u64]);
    let p: Polynomial<S> = random_polynomial(&mut rng, n, top);
    let w: Vec<S> = random_point(&mut rng, n);
    let k = kernel_polynomial(m, &w, top);
    let lhs = inner_product(&p, &k, m);
    let rhs = eval(&p, &w);
    let one = S::real_from_rational(&BigRational::from_integer(1.into()));
    let rel = (lhs - rhs.clone()).norm_sqr() / (one + rhs.norm_sqr());
    Ok(Check::from_measure::<S>(
        Group::Kernel,
        format!("kernel/pair{pair}"),
        &rel,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exact, Float};

    #[test]
    fn small_exact_suite_passes() {
        let cfg = SuiteConfig {
            cases: 2,
            kernel_pairs: 2,
            ..SuiteConfig::new(2, 2, 2, 11).unwrap()
        };
        let report = run_suite::<Exact>(&cfg).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert!(report.checks.iter().any(|c| !c.expect_zero));
    }

    #[test]
    fn classical_line_only_for_scalar_shift() {
        let cfg = SuiteConfig {
            cases: 1,
            kernel_pairs: 1,
            ..SuiteConfig::new(1, 1, 3, 0).unwrap()
        };
        let report = run_suite::<Exact>(&cfg).unwrap();
        assert!(report.passed());
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.contains("classical Brown-Halmos")));
        let cfg = SuiteConfig {
            cases: 1,
            kernel_pairs: 1,
            ..SuiteConfig::new(2, 1, 2, 0).unwrap()
        };
        let report = run_suite::<Exact>(&cfg).unwrap();
        assert!(!report.checks.iter().any(|c| c.name.contains("classical")));
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.contains("m1_projection_form")));
    }

    #[test]
    fn float_suite_passes() {
        let cfg = SuiteConfig {
            cases: 2,
            kernel_pairs: 2,
            ..SuiteConfig::new(2, 3, 2, 5).unwrap()
        };
        let report = run_suite::<Float>(&cfg).unwrap();
        let failed: Vec<_> = report
            .failures()
            .map(|c| (c.name.clone(), c.frobenius_sq.clone()))
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn rejects_degenerate_config() {
        assert!(SuiteConfig::new(0, 1, 2, 0).is_err());
        assert!(SuiteConfig::new(1, 0, 2, 0).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SuiteConfig {
            cases: 2,
            kernel_pairs: 2,
            ..SuiteConfig::new(2, 2, 2, 3).unwrap()
        };
        let a = run_suite::<Exact>(&cfg).unwrap();
        let b = run_suite::<Exact>(&cfg).unwrap();
        assert_eq!(a.checks, b.checks);
    }
}
