//! Coefficient domains: exact rationals and double-precision floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Tolerance used for float comparisons (dedup, invariance, generality).
pub const FLOAT_TOL: f64 = 1e-9;

/// Field operations shared by the exact and float coefficient domains.
///
/// All methods take references so that big rationals are never cloned
/// just to be combined.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// `true` for exact domains.
    const EXACT: bool;
    /// Domain tag used by the text formats.
    const DOMAIN: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Division; callers guarantee `other` is nonzero.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact-to-domain conversion. Total for both domains.
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality within `tol` for floats, exact equality otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    /// Zero test with the domain's tolerance (`tol` ignored when exact).
    fn near_zero(&self, tol: f64) -> bool {
        self.approx_eq(&Self::zero(), tol)
    }
    /// Sign as -1, 0, 1 (floats: exact sign).
    fn signum_i(&self) -> i32;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const DOMAIN: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn signum_i(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const DOMAIN: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &Rational) -> Self {
        Scalar::to_f64(q)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
    fn signum_i(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Integer as a rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den` as a rational. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite value {v}")))
}

/// Parses `p`, `p/q`, or a decimal literal (`-0.125`, `1e-3`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        let den = BigInt::from_str(den.trim()).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("bad number '{s}'")))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Formats a rational as `p/q` (denominator always written).
pub fn format_rational(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses a float from a decimal or `p/q` literal.
pub fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    parse_rational(s).map(|r| Scalar::to_f64(&r))
}

/// Scalars that can be read from and written to the text formats.
pub trait TextScalar: Scalar {
    fn parse_text(s: &str) -> Result<Self>;
    fn format_text(&self) -> String;
}

impl TextScalar for Rational {
    fn parse_text(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn format_text(&self) -> String {
        format_rational(self)
    }
}

impl TextScalar for f64 {
    fn parse_text(s: &str) -> Result<Self> {
        parse_f64(s)
    }
    fn format_text(&self) -> String {
        // `Display` for f64 is the shortest round-tripping decimal.
        format!("{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), qf(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), q(-7));
        assert_eq!(parse_rational("0.125").unwrap(), qf(1, 8));
        assert_eq!(parse_rational("-1.5e2").unwrap(), q(-150));
        assert_eq!(parse_rational("25e-2").unwrap(), qf(1, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn rational_text_always_has_denominator() {
        assert_eq!(format_rational(&q(5)), "5/1");
        assert_eq!(format_rational(&qf(-6, 4)), "-3/2");
    }

    #[test]
    fn float_text_round_trips() {
        for v in [0.1, -2.5e-12, 123456.789, 1.0 / 3.0] {
            assert_eq!(f64::parse_text(&v.format_text()).unwrap(), v);
        }
    }

    #[test]
    fn integer_power() {
        assert_eq!(Scalar::pow(&qf(2, 3), 3), qf(8, 27));
        assert_eq!(Scalar::pow(&2.0f64, 10), 1024.0);
    }
}
