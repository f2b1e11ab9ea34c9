//! Scalar fields used by every matrix in the crate.
//!
//! Two arithmetic modes share the same pipelines: [`Exact`] (complex numbers
//! whose real and imaginary parts are arbitrary-precision rationals) and
//! [`Float`] (complex doubles). Identities are decided by exact zero in the
//! first mode and by a declared threshold on the weighted Frobenius norm in
//! the second.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exact = Complex<BigRational>;
pub type Float = Complex<f64>;

/// Pass threshold on `frobenius_sq` in float mode (about 1e-9 per entry).
pub const FLOAT_FROBENIUS_THRESHOLD: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::InvalidParams(format!(
                "unknown mode `{other}` (expected exact or float)"
            ))),
        }
    }
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    /// Nonnegative magnitudes (norms, residuals).
    type Real: Clone
        + Debug
        + PartialOrd
        + Send
        + Sync
        + Zero
        + Add<Output = Self::Real>
        + Sub<Output = Self::Real>
        + Mul<Output = Self::Real>
        + Div<Output = Self::Real>;

    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_parts(re: &BigRational, im: &BigRational) -> Self;
    fn conj(&self) -> Self;
    fn norm_sqr(&self) -> Self::Real;
    fn scale_real(&self, r: &BigRational) -> Self;
    fn real_from_rational(r: &BigRational) -> Self::Real;
    /// Whether a squared residual counts as zero in this mode.
    fn negligible(frobenius_sq: &Self::Real) -> bool;
    fn real_to_string(r: &Self::Real) -> String;
    fn real_to_f64(r: &Self::Real) -> f64;
    /// Real and imaginary parts in the wire format.
    fn to_strings(&self) -> (String, String);
    fn to_float(&self) -> Float;

    fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(r, &BigRational::zero())
    }

    fn from_integer(i: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(i.into()))
    }
}

impl Scalar for Exact {
    type Real = BigRational;

    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(re.clone(), im.clone())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn scale_real(&self, r: &BigRational) -> Self {
        Complex::new(&self.re * r, &self.im * r)
    }

    fn real_from_rational(r: &BigRational) -> BigRational {
        r.clone()
    }

    fn negligible(frobenius_sq: &BigRational) -> bool {
        frobenius_sq.is_zero()
    }

    fn real_to_string(r: &BigRational) -> String {
        format_rational(r)
    }

    fn real_to_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn to_strings(&self) -> (String, String) {
        (format_rational(&self.re), format_rational(&self.im))
    }

    fn to_float(&self) -> Float {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Scalar for Float {
    type Real = f64;

    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn norm_sqr(&self) -> f64 {
        Complex::norm_sqr(self)
    }

    fn scale_real(&self, r: &BigRational) -> Self {
        self * r.to_f64().unwrap_or(f64::NAN)
    }

    fn real_from_rational(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn negligible(frobenius_sq: &f64) -> bool {
        *frobenius_sq <= FLOAT_FROBENIUS_THRESHOLD
    }

    fn real_to_string(r: &f64) -> String {
        format!("{r:e}")
    }

    fn real_to_f64(r: &f64) -> f64 {
        *r
    }

    fn to_strings(&self) -> (String, String) {
        (format!("{:e}", self.re), format!("{:e}", self.im))
    }

    fn to_float(&self) -> Float {
        *self
    }
}

/// Canonical `numerator/denominator` form with a positive denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a bare integer, or a decimal literal such as `-1.25e-3`.
/// Decimals are converted exactly.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num =
            BigInt::from_str(num.trim()).map_err(|e| format!("bad numerator `{num}`: {e}"))?;
        let den =
            BigInt::from_str(den.trim()).map_err(|e| format!("bad denominator `{den}`: {e}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(i));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> std::result::Result<BigRational, String> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|e| format!("bad exponent in `{s}`: {e}"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("`{s}` is not a number"));
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(format!("`{s}` is not a number"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(
        BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|e| e.to_string())?,
    );
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Absolute distance between two scalars, measured in complex doubles.
pub fn distance<S: Scalar>(a: &S, b: &S) -> f64 {
    (a.to_float() - b.to_float()).norm()
}
