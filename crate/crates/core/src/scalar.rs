use alloc::format;
use core::cmp::Ordering;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used by the exact numeric mode.
pub type Rational = num_rational::BigRational;

/// Field arithmetic shared by the float and exact numeric modes.
///
/// The `*_tol` constructors give the default tolerance of each mode; they are
/// all zero for exact arithmetic.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(n: u64) -> Self;
    /// `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn from_rational(x: &Rational) -> Self;

    /// Normalization tolerance applied at state construction.
    fn norm_tol() -> Self;
    /// Curve comparison tolerance.
    fn cmp_tol() -> Self;
    /// Two Gibbs-rescaled probabilities closer than this are tied.
    fn tie_tol() -> Self;

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

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Rounds sub-tolerance negatives produced by cancellation up to zero.
    fn clamp_tiny_negative(self) -> Self {
        if self < Self::zero() && -self.clone() <= Self::norm_tol() {
            Self::zero()
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(x: &Rational) -> Self {
        x.to_f64_lossy()
    }
    fn norm_tol() -> Self {
        1e-12
    }
    fn cmp_tol() -> Self {
        1e-10
    }
    fn tie_tol() -> Self {
        1e-12
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    /// Uses the shortest decimal that round-trips to `x`, so `0.66` becomes
    /// exactly `33/50` rather than the nearest dyadic fraction.
    fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        parse_rational(&format!("{x}"))
    }
    fn to_f64(&self) -> f64 {
        self.to_f64_lossy()
    }
    fn from_rational(x: &Rational) -> Self {
        x.clone()
    }
    fn norm_tol() -> Self {
        Zero::zero()
    }
    fn cmp_tol() -> Self {
        Zero::zero()
    }
    fn tie_tol() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

trait LossyFloat {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyFloat for Rational {
    fn to_f64_lossy(&self) -> f64 {
        if let Some(v) = ToPrimitive::to_f64(self) {
            if v.is_finite() {
                return v;
            }
        }
        // Numerator and denominator both overflow f64: rescale by powers of two.
        let shift = self.numer().bits() as i64 - self.denom().bits() as i64;
        let (n, d) = if shift > 0 {
            (
                self.numer().clone(),
                self.denom().clone() << (shift as usize),
            )
        } else {
            (
                self.numer().clone() << ((-shift) as usize),
                self.denom().clone(),
            )
        };
        let top = n.bits().saturating_sub(60);
        let nf = ToPrimitive::to_f64(&(n >> top as usize)).unwrap_or(0.0);
        let bot = d.bits().saturating_sub(60);
        let df = ToPrimitive::to_f64(&(d >> bot as usize)).unwrap_or(1.0);
        nf / df * libm::exp2((shift + top as i64 - bot as i64) as f64)
    }
}

/// Parses `"n/d"`, an integer, or a decimal literal with optional exponent
/// into an exact rational. Returns `None` for anything else.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if Zero::is_zero(&d) {
            return None;
        }
        return Some(n / d);
    }
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// An extended real number. Divergent entropies and free energies are
/// reported through the infinite variants rather than overflowed floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// IEEE view for export, mapping the infinite variants to `±INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Lifts an `f64` whose infinities are meaningful (e.g. `ln 0`).
    pub(crate) fn from_f64(v: f64) -> ExtReal {
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(v)
        }
    }

    /// `None` for the indeterminate forms `∞ − ∞`.
    pub fn checked_add(self, other: ExtReal) -> Option<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
        }
    }

    pub fn checked_sub(self, other: ExtReal) -> Option<ExtReal> {
        self.checked_add(-other)
    }

    /// `self ≥ other − tol`, with equal infinities comparing equal.
    pub fn ge_within(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a >= b - tol,
            _ => self.partial_cmp(&other) != Some(Ordering::Less),
        }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::Finite(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Some(Ordering::Equal),
            (NegInf, _) | (_, PosInf) => Some(Ordering::Less),
            (PosInf, _) | (_, NegInf) => Some(Ordering::Greater),
        }
    }
}

impl core::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.66"), Some(q(33, 50)));
        assert_eq!(parse_rational("-1.5e-2"), Some(q(-3, 200)));
        assert_eq!(parse_rational("2/6"), Some(q(1, 3)));
        assert_eq!(parse_rational("12"), Some(q(12, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1e3"), Some(q(1000, 1)));
        assert_eq!(parse_rational("NaN"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn shortest_decimal_rationalization() {
        assert_eq!(<Rational as Scalar>::from_f64(0.95), Some(q(19, 20)));
        assert_eq!(<Rational as Scalar>::from_f64(f64::NAN), None);
        let third = <Rational as Scalar>::from_f64(1.0 / 3.0).unwrap();
        assert_eq!(Scalar::to_f64(&third), 1.0 / 3.0);
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(3),
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(4),
        );
        // new() reduces, so force an unreduced-looking magnitude via raw.
        let raw = Rational::new_raw(
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(3),
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(4),
        );
        assert!((Scalar::to_f64(&big) - 0.75).abs() < 1e-15);
        assert!((raw.to_f64_lossy() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn extended_arithmetic() {
        use ExtReal::*;
        assert_eq!(PosInf.checked_sub(PosInf), None);
        assert_eq!(Finite(1.0).checked_sub(PosInf), Some(NegInf));
        assert!(PosInf.ge_within(PosInf, 0.0));
        assert!(!Finite(0.0).ge_within(PosInf, 1.0));
        assert!(Finite(-1e-11).ge_within(Finite(0.0), 1e-10));
        assert!(NegInf < Finite(-1e300));
    }
}
