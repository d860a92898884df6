//! Scalar abstraction shared by the cone, LP and certificate code.
//!
//! Float instantiations compare against an absolute tolerance; the rational
//! instantiation compares exactly.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Numeric type usable by the generic algorithms in this crate.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic on this type is exact.
    const EXACT: bool;

    /// Absolute threshold under which a value is treated as zero.
    fn tolerance() -> Self;

    /// Smallest pivot magnitude the simplex accepts.
    fn pivot_tolerance() -> Self;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact conversion of the stored value into a rational.
    fn to_rational(&self) -> BigRational;

    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn near_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer conversion")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-9
    }

    fn pivot_tolerance() -> Self {
        1e-11
    }

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-5
    }

    fn pivot_tolerance() -> Self {
        1e-6
    }

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q) as f32
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        BigRational::zero()
    }

    fn pivot_tolerance() -> Self {
        BigRational::zero()
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    /// Exact binary value of `v`; non-finite input maps to zero.
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(BigRational::zero)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Nearest-ish `f64` for a rational, robust to huge numerators/denominators.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Keep ~64 significant bits in an integer quotient, then rescale.
    let k = 64 + q.denom().bits() as i64 - q.numer().magnitude().bits() as i64;
    let quotient: BigInt = if k >= 0 {
        (q.numer() << k as usize) / q.denom()
    } else {
        q.numer() / (q.denom() << (-k) as usize)
    };
    let mut v = quotient.to_f64().unwrap_or(f64::NAN);
    let half = (k / 2) as i32;
    v *= 2f64.powi(-half);
    v *= 2f64.powi(-((k as i32) - half));
    v
}

/// Parses a decimal (`-1.25`, `3e-2`) or fraction (`7/3`) literal exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut factor = BigRational::one();
    for _ in 0..scale.unsigned_abs() {
        factor *= &ten;
    }
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter()
        .map(|x| x.abs())
        .fold(S::zero(), |a, b| if b > a { b } else { a })
}

pub fn convert_vec<S: Scalar, T: Scalar>(v: &[S]) -> Vec<T> {
    v.iter().map(|x| T::from_rational(&x.to_rational())).collect()
}
