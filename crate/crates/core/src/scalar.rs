//! Numeric backends.
//!
//! Two backends implement [`Scalar`]: exact rationals ([`Rational`]) and IEEE
//! doubles (`f64`). Every container in this crate is generic over the backend,
//! so values from different backends can never meet in one computation.

use core::cmp::Ordering;
use core::fmt::{self, Debug, Display};
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational scalar.
pub type Rational = Ratio<i128>;

/// Which numeric backend a scalar type belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

/// Classification of a raw numeric payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Finite,
    PosInf,
    NegInf,
    Nan,
}

/// Error produced when a numeric literal cannot be parsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseScalarError {
    pub literal: alloc::string::String,
}

impl Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid numeric literal `{}`", self.literal)
    }
}

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Converts an exact rational; the float backend rounds to nearest.
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn classify(&self) -> Class;
    fn parse_literal(s: &str) -> Result<Self, ParseScalarError>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Total comparison of finite payloads. Panics on NaN, which no container
    /// in this crate ever stores.
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("NaN scalar")
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        <Ratio<i128> as Zero>::zero()
    }
    fn one() -> Self {
        Ratio::from_integer(1)
    }
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
    fn from_rational(q: &Rational) -> Self {
        *q
    }
    fn to_f64(&self) -> f64 {
        // Both conversions are exact below 2^53, so the quotient is then
        // correctly rounded.
        *self.numer() as f64 / *self.denom() as f64
    }
    fn classify(&self) -> Class {
        Class::Finite
    }
    fn parse_literal(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn classify(&self) -> Class {
        if self.is_nan() {
            Class::Nan
        } else if *self == f64::INFINITY {
            Class::PosInf
        } else if *self == f64::NEG_INFINITY {
            Class::NegInf
        } else {
            Class::Finite
        }
    }
    fn parse_literal(s: &str) -> Result<Self, ParseScalarError> {
        let t = s.trim();
        if t.contains('/') {
            return parse_rational(t).map(|q| Scalar::to_f64(&q));
        }
        match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(ParseScalarError { literal: s.into() }),
        }
    }
    fn abs(&self) -> Self {
        if *self < 0.0 {
            -*self
        } else {
            *self
        }
    }
}

/// Parses `p/q`, an integer, or a finite decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let err = || ParseScalarError { literal: s.into() };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| err())?;
        let q: i128 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(p, q));
    }
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) || frac_part.len() > 30 {
        return Err(err());
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add((b - b'0') as i128))
            .ok_or_else(err)?;
    }
    let denom = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(err)?;
    let q = Ratio::new(numer, denom);
    Ok(if neg { -q } else { q })
}

/// Returns true when `q` converts to `f64` without rounding.
pub fn exactly_representable(q: &Rational) -> bool {
    let v = Scalar::to_f64(q);
    if !v.is_finite() {
        return false;
    }
    float_to_rational_exact(v).is_some_and(|e| e == *q)
}

// Decomposes a finite double into mantissa * 2^exp and returns the exact
// rational when it fits in i128.
fn float_to_rational_exact(v: f64) -> Option<Rational> {
    if v == 0.0 {
        return Some(<Ratio<i128> as Zero>::zero());
    }
    let bits = v.to_bits();
    let sign: i128 = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mant = if exp == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    let e = exp - 1075;
    let m = sign * mant as i128;
    if e >= 0 {
        if e > 70 {
            return None;
        }
        Some(Ratio::from_integer(m.checked_mul(1i128 << e)?))
    } else {
        if -e > 120 {
            return None;
        }
        Some(Ratio::new(m, 1i128 << (-e)))
    }
}

/// Inner product of two equal-length coordinate slices.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// Convenience constructor for rational literals in code and tests.
pub fn q(n: i64, d: i64) -> Rational {
    Ratio::new(n as i128, d as i128)
}

/// `rv(&[1, -2])` builds an integer-valued rational vector.
pub fn rv(xs: &[i64]) -> alloc::vec::Vec<Rational> {
    xs.iter().map(|&x| Rational::from_i64(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn float_literals_accept_rational_syntax() {
        assert_eq!(f64::parse_literal("1/4").unwrap(), 0.25);
        assert_eq!(f64::parse_literal("-2.5").unwrap(), -2.5);
        assert!(f64::parse_literal("inf").is_err());
    }

    #[test]
    fn representability() {
        assert!(exactly_representable(&q(3, 8)));
        assert!(exactly_representable(&q(-5, 1)));
        assert!(!exactly_representable(&q(1, 3)));
        assert!(!exactly_representable(&q(1, 10)));
    }

    #[test]
    fn dot_product() {
        assert_eq!(dot(&rv(&[1, 2]), &rv(&[3, -1])), q(1, 1));
        assert_eq!(dot::<f64>(&[], &[]), 0.0);
    }
}
