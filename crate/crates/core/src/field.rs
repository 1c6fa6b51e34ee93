//! Scalar abstraction shared by the exact (big-rational) and floating paths.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational used on every exact path.
pub type Rational = BigRational;

/// An ordered field: `f64` for the numeric path, [`Rational`] for the exact one.
pub trait Field:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Weight used for pivot selection; any nonzero value is a valid pivot.
    fn magnitude(&self) -> f64 {
        self.to_f64_lossy().abs()
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits every field")
    }

    /// Sign as an ordering relative to zero.
    fn sign(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl<T> Field for T where
    T: Clone
        + Debug
        + PartialEq
        + PartialOrd
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact binary value of a finite double.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::InvalidInput(format!("non-finite value {v}")))
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A parsed scalar: exact when written as an integer or `p/q`, floating otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedScalar {
    Exact(Rational),
    Float(f64),
}

impl ParsedScalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            ParsedScalar::Exact(r) => r.to_f64_lossy(),
            ParsedScalar::Float(v) => *v,
        }
    }
}

pub fn parse_scalar(text: &str) -> Result<ParsedScalar> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::InvalidInput("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str_radix(n.trim(), 10)
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let den = BigInt::from_str_radix(d.trim(), 10)
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(ParsedScalar::Exact(Rational::new(num, den)));
    }
    if let Ok(i) = BigInt::from_str_radix(s, 10) {
        return Ok(ParsedScalar::Exact(Rational::from_integer(i)));
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(ParsedScalar::Float(v)),
        _ => Err(Error::InvalidInput(format!("cannot parse {s:?} as a number"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_integers_and_decimals() {
        assert_eq!(parse_scalar("-27/4").unwrap(), ParsedScalar::Exact(rat(-27, 4)));
        assert_eq!(parse_scalar(" 3 ").unwrap(), ParsedScalar::Exact(int(3)));
        assert_eq!(parse_scalar("0.75").unwrap(), ParsedScalar::Float(0.75));
        assert_eq!(parse_scalar("-26/10").unwrap(), ParsedScalar::Exact(rat(-13, 5)));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("nan").is_err());
    }

    #[test]
    fn rational_display() {
        assert_eq!(rational_to_string(&rat(6, 4)), "3/2");
        assert_eq!(rational_to_string(&int(-5)), "-5");
    }

    #[test]
    fn exact_float_conversion() {
        assert_eq!(rational_from_f64(0.5).unwrap(), rat(1, 2));
        assert!(rational_from_f64(f64::INFINITY).is_err());
    }
}
