//! Depressed quartics `E(u) = u^4 + q u^2 + r u + s`: discriminant and root character.

use crate::field::Field;
use crate::roots::RootPattern;

/// `Δ(E) = -4q³r² - 27r⁴ + 16q⁴s + 144qr²s - 128q²s² + 256s³`.
pub fn quartic_discriminant<T: Field>(q: &T, r: &T, s: &T) -> T {
    let c = |v: i64| T::from_int(v);
    let q2 = q.clone() * q.clone();
    let q3 = q2.clone() * q.clone();
    let q4 = q2.clone() * q2.clone();
    let r2 = r.clone() * r.clone();
    let r4 = r2.clone() * r2.clone();
    let s2 = s.clone() * s.clone();
    let s3 = s2.clone() * s.clone();
    c(-4) * q3 * r2.clone() - c(27) * r4 + c(16) * q4 * s.clone() + c(144) * q.clone() * r2 * s.clone()
        - c(128) * q2 * s2
        + c(256) * s3
}

/// Root character of `E` decided from the signs of `Δ`, `q`, `r`, `s` alone.
///
/// On `Δ = 0` the sub-cases are keyed by where `s` sits relative to `-q²/12` and
/// `q²/4`. Sign combinations that cannot occur with `Δ = 0` (reachable only through
/// rounding on the `f64` path) fall to the nearest admissible case.
pub fn quartic_character<T: Field>(q: &T, r: &T, s: &T) -> RootPattern {
    use RootPattern::*;
    use std::cmp::Ordering::*;

    let disc = quartic_discriminant(q, r, s);
    let q2 = q.clone() * q.clone();
    // Compare 4s with q² and 12s with -q².
    let vs_quarter = (T::from_int(4) * s.clone() - q2.clone()).sign();
    let vs_twelfth = (T::from_int(12) * s.clone() + q2).sign();

    match disc.sign() {
        Less => TwoRealPairComplex,
        Greater => {
            if q.sign() == Less && vs_quarter == Less {
                FourDistinctReal
            } else {
                AllComplexDistinct
            }
        }
        Equal => match q.sign() {
            Less => match (vs_quarter, vs_twelfth) {
                (Greater, _) => DoubleRealPlusComplexPair,
                (Equal, _) => TwoDoubleReal,
                (Less, Greater) => OneDoubleTwoRealSimple,
                (Less, Equal) => TripleRealPlusSimple,
                (Less, Less) => TripleRealPlusSimple,
            },
            Greater => {
                if vs_quarter == Equal && r.is_zero() {
                    TwoDoubleComplexPairs
                } else {
                    DoubleRealPlusComplexPair
                }
            }
            Equal => {
                if s.is_zero() {
                    QuadrupleReal
                } else {
                    DoubleRealPlusComplexPair
                }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat, Rational};
    use RootPattern::*;

    fn ch(q: Rational, r: Rational, s: Rational) -> RootPattern {
        quartic_character(&q, &r, &s)
    }

    #[test]
    fn discriminant_closed_form() {
        assert_eq!(quartic_discriminant(&int(-5), &int(0), &int(4)), int(5184));
        assert_eq!(quartic_discriminant(&int(-2), &int(0), &int(1)), int(0));
        assert_eq!(quartic_discriminant(&0.0, &0.0, &1.0), 256.0);
    }

    #[test]
    fn distinct_cases() {
        assert_eq!(ch(int(-5), int(0), int(4)), FourDistinctReal);
        assert_eq!(ch(int(0), int(0), int(1)), AllComplexDistinct);
        // (u^2+1)(u^2+4)
        assert_eq!(ch(int(5), int(0), int(4)), AllComplexDistinct);
        // (u^2-1)(u^2+1) = u^4 - 1
        assert_eq!(ch(int(0), int(0), int(-1)), TwoRealPairComplex);
        // q < 0 but s > q²/4: (u^2 - u + 1)(u^2 + u + 1) = u^4 + u^2 + 1 has q > 0; use u^4 - u^2 + 1
        assert_eq!(ch(int(-1), int(0), int(1)), AllComplexDistinct);
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(ch(int(0), int(0), int(0)), QuadrupleReal);
        // (u^2-1)^2
        assert_eq!(ch(int(-2), int(0), int(1)), TwoDoubleReal);
        // (u^2+1)^2
        assert_eq!(ch(int(2), int(0), int(1)), TwoDoubleComplexPairs);
        // u^2 (u^2 + 1)
        assert_eq!(ch(int(1), int(0), int(0)), DoubleRealPlusComplexPair);
        // u^2 (u^2 - 1)
        assert_eq!(ch(int(-1), int(0), int(0)), OneDoubleTwoRealSimple);
        // (u-1)^3 (u+3) = u^4 - 6u^2 + 8u - 3
        assert_eq!(ch(int(-6), int(8), int(-3)), TripleRealPlusSimple);
        // (u-1)^2 (u^2 + 2u + 3) = u^4 + 0u^3 + 0u^2 - 4u + 3
        assert_eq!(ch(int(0), int(-4), int(3)), DoubleRealPlusComplexPair);
        // (u-1)^2 (u^2+2u+2) = u^4 - u^2 - 2u + 2: q < 0, s > q²/4
        assert_eq!(ch(int(-1), int(-2), int(2)), DoubleRealPlusComplexPair);
        // (u - 1/2)^2 (u^2 + u + 5/4) with q > 0 and r ≠ 0
        assert_eq!(ch(rat(1, 2), int(-1), rat(5, 16)), DoubleRealPlusComplexPair);
    }
}
