//! Extended reals with the conjugation conventions.
//!
//! Sums that pair `+inf` with `-inf` evaluate to `-inf`, in either order, and
//! so do `(+inf) - (+inf)` and `(-inf) - (-inf)`. With these conventions every
//! supremum of the form `sup { c(x, w) - f(x) }` is well defined.
//!
//! n-ary sums are folded left to right. Because `-inf` absorbs everything,
//! including a later `+inf`, a sum that contains both infinities evaluates to
//! `-inf` regardless of the order of its terms.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::scalar::{Class, ParseScalarError, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum ExtReal<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> ExtReal<S> {
    /// Wraps a raw payload. Float infinities are mapped onto the infinite tags.
    ///
    /// # Panics
    ///
    /// On a NaN payload.
    pub fn new(v: S) -> Self {
        match v.classify() {
            Class::Finite => ExtReal::Finite(v),
            Class::PosInf => ExtReal::PosInf,
            Class::NegInf => ExtReal::NegInf,
            Class::Nan => panic!("NaN cannot be stored in an extended real"),
        }
    }

    pub fn zero() -> Self {
        ExtReal::Finite(S::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        ExtReal::Finite(S::from_i64(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtReal::NegInf)
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        use ExtReal::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => ExtReal::new(a.clone() + b.clone()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v.clone()),
        }
    }

    /// `a - b = a + (-b)` under the same conventions.
    pub fn sub(&self, other: &Self) -> Self {
        use ExtReal::*;
        match (self, other) {
            (NegInf, _) | (_, PosInf) => NegInf,
            (PosInf, _) | (_, NegInf) => PosInf,
            (Finite(a), Finite(b)) => ExtReal::new(a.clone() - b.clone()),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v.abs()),
            _ => ExtReal::PosInf,
        }
    }

    /// Scales by a finite factor `t >= 0`, with `0 * (+-inf) = 0`.
    pub fn scale(&self, t: &S) -> Self {
        if t.is_zero() {
            return ExtReal::zero();
        }
        match self {
            ExtReal::Finite(v) => ExtReal::new(v.clone() * t.clone()),
            other => other.clone(),
        }
    }

    /// Equality up to an absolute tolerance on finite values; infinite values
    /// must carry the same tag.
    pub fn within(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a.clone() - b.clone()).abs().to_f64() <= tol,
            (a, b) => a == b,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Finite(v) => v.to_f64(),
        }
    }

    /// Parses `inf`, `+inf`, `-inf`, or a finite literal of the backend.
    pub fn parse(s: &str) -> Result<Self, ParseScalarError> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtReal::PosInf),
            "-inf" => Ok(ExtReal::NegInf),
            t => S::parse_literal(t).map(ExtReal::new),
        }
    }
}

impl<S: Scalar> Eq for ExtReal<S> {}

impl<S: Scalar> PartialOrd for ExtReal<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for ExtReal<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.total_cmp(b),
        }
    }
}

impl<S: Scalar> Add for ExtReal<S> {
    type Output = ExtReal<S>;
    fn add(self, rhs: Self) -> Self {
        ExtReal::add(&self, &rhs)
    }
}

impl<S: Scalar> Sub for ExtReal<S> {
    type Output = ExtReal<S>;
    fn sub(self, rhs: Self) -> Self {
        ExtReal::sub(&self, &rhs)
    }
}

impl<'a, S: Scalar> Add for &'a ExtReal<S> {
    type Output = ExtReal<S>;
    fn add(self, rhs: Self) -> ExtReal<S> {
        ExtReal::add(self, rhs)
    }
}

impl<'a, S: Scalar> Sub for &'a ExtReal<S> {
    type Output = ExtReal<S>;
    fn sub(self, rhs: Self) -> ExtReal<S> {
        ExtReal::sub(self, rhs)
    }
}

impl<S: Scalar> Neg for ExtReal<S> {
    type Output = ExtReal<S>;
    fn neg(self) -> Self {
        ExtReal::neg(&self)
    }
}

impl<S: Scalar> From<S> for ExtReal<S> {
    fn from(v: S) -> Self {
        ExtReal::new(v)
    }
}

impl<S: Scalar> fmt::Display for ExtReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("inf"),
            ExtReal::Finite(v) => write!(f, "{}", v),
        }
    }
}

impl<S: Scalar> core::str::FromStr for ExtReal<S> {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExtReal::parse(s)
    }
}

/// Supremum of a finite family; `-inf` for the empty family.
pub fn sup<S: Scalar, I: IntoIterator<Item = ExtReal<S>>>(values: I) -> ExtReal<S> {
    values.into_iter().fold(ExtReal::NegInf, |acc, v| if v > acc { v } else { acc })
}

/// Infimum of a finite family; `+inf` for the empty family.
pub fn inf<S: Scalar, I: IntoIterator<Item = ExtReal<S>>>(values: I) -> ExtReal<S> {
    values.into_iter().fold(ExtReal::PosInf, |acc, v| if v < acc { v } else { acc })
}

/// Left fold of [`ExtReal::add`] starting from zero.
pub fn sum<S: Scalar, I: IntoIterator<Item = ExtReal<S>>>(values: I) -> ExtReal<S> {
    values.into_iter().fold(ExtReal::zero(), |acc, v| ExtReal::add(&acc, &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    type E = ExtReal<Rational>;

    fn fin(n: i64) -> E {
        ExtReal::from_i64(n)
    }

    fn domain() -> Vec<E> {
        vec![E::NegInf, fin(-1), fin(0), fin(1), E::PosInf]
    }

    #[test]
    fn convention_table() {
        assert_eq!(E::PosInf + E::NegInf, E::NegInf);
        assert_eq!(E::NegInf + E::PosInf, E::NegInf);
        assert_eq!(E::PosInf - E::PosInf, E::NegInf);
        assert_eq!(E::NegInf - E::NegInf, E::NegInf);
        assert_eq!(fin(3) + fin(4), fin(7));
        assert_eq!(E::NegInf + fin(5), E::NegInf);
        assert_eq!(E::PosInf + fin(5), E::PosInf);
        assert_eq!(fin(0) - fin(0), fin(0));
        assert_eq!(fin(5) - E::NegInf, E::PosInf);
    }

    #[test]
    fn sub_is_add_of_negation() {
        for a in domain() {
            for b in domain() {
                assert_eq!(ExtReal::sub(&a, &b), ExtReal::add(&a, &ExtReal::neg(&b)), "{a} - {b}");
            }
        }
    }

    #[test]
    fn mixed_sums_are_neg_inf_in_any_order() {
        let d = domain();
        for a in &d {
            for b in &d {
                assert_eq!(a.add(b), b.add(a));
                for c in &d {
                    let s = sum([a.clone(), b.clone(), c.clone()]);
                    let has_pos = [a, b, c].iter().any(|v| v.is_pos_inf());
                    let has_neg = [a, b, c].iter().any(|v| v.is_neg_inf());
                    if has_pos && has_neg {
                        assert_eq!(s, E::NegInf);
                    }
                    assert_eq!(s, sum([c.clone(), a.clone(), b.clone()]));
                }
            }
        }
    }

    #[test]
    fn sup_inf_conventions() {
        assert_eq!(sup::<Rational, _>([]), E::NegInf);
        assert_eq!(inf::<Rational, _>([]), E::PosInf);
        assert_eq!(inf([fin(3), E::NegInf, fin(7)]), E::NegInf);
        assert_eq!(sup([fin(1), fin(2), E::PosInf]), E::PosInf);
    }

    #[test]
    fn ordering_is_total() {
        let d = domain();
        for w in d.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn text_round_trip() {
        for v in [E::NegInf, E::PosInf, ExtReal::Finite(q(-3, 4)), fin(12)] {
            let s = v.to_string();
            assert_eq!(E::parse(&s).unwrap(), v);
        }
        let f: ExtReal<f64> = ExtReal::parse("0.1").unwrap();
        assert_eq!(ExtReal::<f64>::parse(&f.to_string()).unwrap(), f);
        assert_eq!(ExtReal::<f64>::new(f64::INFINITY), ExtReal::PosInf);
    }

    #[test]
    #[should_panic]
    fn nan_rejected() {
        let _ = ExtReal::<f64>::new(f64::NAN);
    }

    #[test]
    fn float_overflow_becomes_infinite() {
        let big = ExtReal::<f64>::new(f64::MAX);
        assert_eq!(ExtReal::add(&big, &big), ExtReal::PosInf);
    }
}
