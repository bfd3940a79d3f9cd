//! Numeric backends.
//!
//! Every engine is generic over [`Scalar`], which is implemented for `f64`
//! (fast sweeps) and [`Rational`] (exact verification at threshold points).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Absolute tolerance used by floating-point comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// True for exact arithmetic.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    /// Picks whichever stored representation matches this backend.
    fn pick(exact: &Rational, float: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Comparison slack: zero for exact arithmetic.
    fn tolerance() -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self >= other` up to tolerance.
    fn approx_ge(&self, other: &Self) -> bool {
        self.clone() + Self::tolerance() >= other.clone()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs_val() <= Self::tolerance()
    }

    fn is_positive(&self) -> bool {
        *self > Self::tolerance()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn pick(_exact: &Rational, float: f64) -> Self {
        float
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn pick(exact: &Rational, _float: f64) -> Self {
        exact.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn tolerance() -> Self {
        Rational::zero()
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = ToPrimitive::to_f64(r.numer()).unwrap_or(f64::NAN);
        let d = ToPrimitive::to_f64(r.denom()).unwrap_or(f64::NAN);
        n / d
    })
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Converts a finite float to the exact rational it denotes in decimal
/// shortest-representation form (so `0.1` becomes `1/10`).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    parse_rational(&format!("{x}")).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{0}`")]
pub struct NumberError(pub String);

/// Parses `p/q`, integers, and decimals (optionally with an exponent) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, NumberError> {
    let t = text.trim();
    let err = || NumberError(t.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&all).map_err(|_| err())?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        for _ in 0..scale {
            value *= ten.clone();
        }
    } else {
        for _ in 0..(-scale) {
            value /= ten.clone();
        }
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Canonical textual form: integers bare, everything else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer `k`-th root test helper: true iff `x <= y^(1/k)` for `x, y >= 0`,
/// evaluated exactly as `x^k <= y`.
pub fn le_root<S: Scalar>(x: &S, y: &S, k: u32) -> bool {
    let mut p = S::one();
    for _ in 0..k {
        p = p * x.clone();
    }
    y.approx_ge(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-1e6").unwrap(), int(-1_000_000));
        assert_eq!(parse_rational("2.5e-1").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(" 3 ").unwrap(), int(3));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1.2.3", "-", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn float_round_trip_is_decimal() {
        assert_eq!(rational_from_f64(0.49).unwrap(), ratio(49, 100));
        assert_eq!(format_rational(&ratio(8, 9)), "8/9");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    #[test]
    fn tolerant_comparisons() {
        assert!(1.0f64.approx_ge(&(1.0 + 1e-12)));
        assert!(!ratio(1, 3).approx_ge(&ratio(1, 3).add(ratio(1, 1_000_000_000))));
        assert!(le_root(&ratio(2, 3), &ratio(2, 3), 1));
        assert!(!le_root(&ratio(9, 10), &ratio(2, 3), 3));
        assert!(le_root(&ratio(9, 10), &ratio(2, 3), 4));
    }
}
