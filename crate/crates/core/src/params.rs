//! The parameter triple `(α, β, γ)` of the symbol `b(z) = -1/z + αz - βz² + γz³`.

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{parse_scalar, rational_from_f64, rational_to_string, Field, ParsedScalar, Rational};

/// Exact rational copy of the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

/// `(α, β, γ)` with `γ ≠ 0`. Carries exact rationals when constructed from them.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    exact: Option<ExactParams>,
}

impl SymbolParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidInput("parameters must be finite".into()));
        }
        if gamma == 0.0 {
            return Err(Error::GammaZero);
        }
        Ok(SymbolParams {
            alpha,
            beta,
            gamma,
            exact: None,
        })
    }

    pub fn exact(alpha: Rational, beta: Rational, gamma: Rational) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::GammaZero);
        }
        Ok(SymbolParams {
            alpha: alpha.to_f64_lossy(),
            beta: beta.to_f64_lossy(),
            gamma: gamma.to_f64_lossy(),
            exact: Some(ExactParams { alpha, beta, gamma }),
        })
    }

    /// Exact when all three scalars are exact, floating otherwise.
    pub fn from_scalars(alpha: &ParsedScalar, beta: &ParsedScalar, gamma: &ParsedScalar) -> Result<Self> {
        match (alpha, beta, gamma) {
            (ParsedScalar::Exact(a), ParsedScalar::Exact(b), ParsedScalar::Exact(g)) => {
                Self::exact(a.clone(), b.clone(), g.clone())
            }
            _ => Self::new(alpha.to_f64(), beta.to_f64(), gamma.to_f64()),
        }
    }

    /// Parse three strings such as `"-27/4"`, `"1"`, `"0.75"`.
    pub fn parse(alpha: &str, beta: &str, gamma: &str) -> Result<Self> {
        Self::from_scalars(&parse_scalar(alpha)?, &parse_scalar(beta)?, &parse_scalar(gamma)?)
    }

    /// Exact parameters equal to the binary values of the given doubles.
    pub fn exact_from_f64(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::exact(
            rational_from_f64(alpha)?,
            rational_from_f64(beta)?,
            rational_from_f64(gamma)?,
        )
    }

    pub fn exact_params(&self) -> Option<&ExactParams> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `(α t², β t³, γ t⁴)`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.alpha * t * t, self.beta * t * t * t, self.gamma * t.powi(4))
    }

    /// `(α t², β t³, γ t⁴)` keeping exactness.
    pub fn scaled_exact(&self, t: &Rational) -> Result<Self> {
        let e = self
            .exact
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("parameters are not exact".into()))?;
        if !t.is_positive() {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        let t2 = t * t;
        Self::exact(&e.alpha * &t2, &e.beta * &t2 * t, &e.gamma * &t2 * &t2)
    }

    /// `v = αγ - β²/4`.
    pub fn v(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.beta / 4.0
    }

    pub fn v_exact(&self) -> Option<Rational> {
        self.exact
            .as_ref()
            .map(|e| &e.alpha * &e.gamma - &e.beta * &e.beta / Rational::from_int(4))
    }

    /// Display strings: `p/q` when exact, shortest round-trip decimal otherwise.
    pub fn display(&self) -> [String; 3] {
        match &self.exact {
            Some(e) => [
                rational_to_string(&e.alpha),
                rational_to_string(&e.beta),
                rational_to_string(&e.gamma),
            ],
            None => [self.alpha.to_string(), self.beta.to_string(), self.gamma.to_string()],
        }
    }
}

impl Serialize for SymbolParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let [a, b, g] = self.display();
        let mut s = serializer.serialize_struct("SymbolParams", 7)?;
        s.serialize_field("alpha", &self.alpha)?;
        s.serialize_field("beta", &self.beta)?;
        s.serialize_field("gamma", &self.gamma)?;
        s.serialize_field("exact", &self.is_exact())?;
        s.serialize_field("alpha_text", &a)?;
        s.serialize_field("beta_text", &b)?;
        s.serialize_field("gamma_text", &g)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    #[test]
    fn gamma_must_be_nonzero() {
        assert!(matches!(SymbolParams::new(1.0, 1.0, 0.0), Err(Error::GammaZero)));
        assert!(matches!(SymbolParams::parse("1", "1", "0"), Err(Error::GammaZero)));
        assert!(SymbolParams::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn parse_keeps_exactness() {
        let p = SymbolParams::parse("-27/4", "-7/8", "5/2").unwrap();
        assert_eq!(p.exact_params().unwrap().alpha, rat(-27, 4));
        assert_eq!(p.alpha, -6.75);
        let f = SymbolParams::parse("0.75", "1", "-1/5").unwrap();
        assert!(!f.is_exact());
        assert_eq!(f.gamma, -0.2);
    }

    #[test]
    fn weighted_scaling() {
        let p = SymbolParams::parse("-2", "1", "-1").unwrap();
        let s = p.scaled_exact(&int(2)).unwrap();
        let e = s.exact_params().unwrap();
        assert_eq!((e.alpha.clone(), e.beta.clone(), e.gamma.clone()), (int(-8), int(8), int(-16)));
        let f = p.scaled(0.5).unwrap();
        assert_eq!((f.alpha, f.beta, f.gamma), (-0.5, 0.125, -0.0625));
        // v has weight 6
        assert_eq!(s.v_exact().unwrap(), p.v_exact().unwrap() * int(64));
    }
}
