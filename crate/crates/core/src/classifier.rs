//! Exact discriminant casework deciding whether every `P_n` is real-rooted.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{rational_to_string, Field, Rational};
use crate::netcurve::BivariateS;
use crate::params::SymbolParams;
use crate::poly::{Poly, RationalPoly, RealPoly};
use crate::quartic::{quartic_character, quartic_discriminant};
use crate::roots::{find_roots, RootPattern, RootSet};

/// A real quantity whose sign is decided exactly when a rational value is present.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedValue {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl SignedValue {
    fn from_exact(r: Rational) -> Self {
        SignedValue {
            value: r.to_f64_lossy(),
            exact: Some(r),
        }
    }

    fn from_float(v: f64) -> Self {
        SignedValue { value: v, exact: None }
    }

    pub fn sign(&self) -> Ordering {
        match &self.exact {
            Some(r) => r.sign(),
            None => self.value.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    /// Sign of the `f64` value alone, ignoring any exact copy.
    pub fn float_sign(&self) -> Ordering {
        self.value.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl Serialize for SignedValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SignedValue", 2)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("exact", &self.exact.as_ref().map(rational_to_string))?;
        s.end()
    }
}

/// Evaluate a polynomial expression of the parameters on the exact path when possible.
fn compute<F, G>(params: &SymbolParams, exact: F, float: G) -> SignedValue
where
    F: Fn(&Rational, &Rational, &Rational) -> Rational,
    G: Fn(f64, f64, f64) -> f64,
{
    match params.exact_params() {
        Some(e) => SignedValue::from_exact(exact(&e.alpha, &e.beta, &e.gamma)),
        None => SignedValue::from_float(float(params.alpha, params.beta, params.gamma)),
    }
}

fn both<F, G>(params: &SymbolParams, f: F, g: G) -> (SignedValue, SignedValue)
where
    F: Fn(&Rational, &Rational, &Rational) -> Rational,
    G: Fn(f64, f64, f64) -> f64,
{
    let float = SignedValue::from_float(g(params.alpha, params.beta, params.gamma));
    (compute(params, f, &g), float)
}

fn q(v: i64) -> Rational {
    Rational::from_int(v)
}

/// `G`, its reversal `J`, and the quadratic `W` and cubic `H` attached to the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxiliaryPolys {
    /// `3γz⁴ - 2βz³ + αz² + 1`; `b'(z) = G(z) / z²`.
    pub g: RealPoly,
    /// `u⁴ + αu² - 2βu + 3γ = u⁴ G(1/u)`.
    pub j: RealPoly,
    /// `αz² + βz + 3γ`.
    pub w: RealPoly,
    /// `z³ + λz + μ` with `λ = 2^{4/3} γ` and `μ = (4αγ - β²)/(3√3)`; floating point only.
    pub h: RealPoly,
    pub exact: Option<ExactAuxiliary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactAuxiliary {
    pub g: RationalPoly,
    pub j: RationalPoly,
    pub w: RationalPoly,
}

fn g_coeffs<T: Field>(a: &T, b: &T, c: &T) -> Poly<T> {
    Poly::new(vec![
        T::one(),
        T::zero(),
        a.clone(),
        T::from_int(-2) * b.clone(),
        T::from_int(3) * c.clone(),
    ])
}

fn w_coeffs<T: Field>(a: &T, b: &T, c: &T) -> Poly<T> {
    Poly::new(vec![T::from_int(3) * c.clone(), b.clone(), a.clone()])
}

pub fn auxiliary_polys(params: &SymbolParams) -> AuxiliaryPolys {
    let (a, b, c) = (params.alpha, params.beta, params.gamma);
    let lambda = 2f64.powf(4.0 / 3.0) * c;
    let mu = (4.0 * a * c - b * b) / (3.0 * 3f64.sqrt());
    let exact = params.exact_params().map(|e| {
        let g = g_coeffs(&e.alpha, &e.beta, &e.gamma);
        ExactAuxiliary {
            j: g.reverse(),
            w: w_coeffs(&e.alpha, &e.beta, &e.gamma),
            g,
        }
    });
    let (g, w) = match &exact {
        Some(x) => (x.g.to_f64(), x.w.to_f64()),
        None => (g_coeffs(&a, &b, &c), w_coeffs(&a, &b, &c)),
    };
    AuxiliaryPolys {
        j: g.reverse(),
        g,
        w,
        h: Poly::new(vec![mu, lambda, 0.0, 1.0]),
        exact,
    }
}

/// Discriminant of `G`, computed as that of `J(u) = u⁴ + αu² - 2βu + 3γ`; the two agree
/// because reversal preserves the discriminant of a quartic with nonzero constant term.
pub fn disc_g(params: &SymbolParams) -> SignedValue {
    compute(
        params,
        |a, b, c| quartic_discriminant(a, &(q(-2) * b), &(q(3) * c)),
        |a, b, c| quartic_discriminant(&a, &(-2.0 * b), &(3.0 * c)),
    )
}

/// `3α⁴γ - α³β² - 72α²γ² + 108αβ²γ - 27β⁴ + 432γ³`, equal to `Δ(G) / 16`.
pub fn disc_g_factor(params: &SymbolParams) -> SignedValue {
    fn f<T: Field>(a: &T, b: &T, c: &T) -> T {
        let k = |v: i64| T::from_int(v);
        let a2 = a.clone() * a.clone();
        let b2 = b.clone() * b.clone();
        let c2 = c.clone() * c.clone();
        k(3) * a2.clone() * a2.clone() * c.clone() - a2.clone() * a.clone() * b2.clone() - k(72) * a2 * c2.clone()
            + k(108) * a.clone() * b2.clone() * c.clone()
            - k(27) * b2.clone() * b2
            + k(432) * c2 * c.clone()
    }
    compute(params, f, |a, b, c| f(&a, &b, &c))
}

/// `Δ(W) = β² - 12αγ`.
pub fn disc_w(params: &SymbolParams) -> SignedValue {
    compute(params, |a, b, c| b * b - q(12) * a * c, |a, b, c| b * b - 12.0 * a * c)
}

/// `64γ³ + (4αγ - β²)²`, the negated textbook discriminant of `H`.
pub fn disc_h(params: &SymbolParams) -> SignedValue {
    fn f<T: Field>(a: &T, b: &T, c: &T) -> T {
        let t = T::from_int(4) * a.clone() * c.clone() - b.clone() * b.clone();
        T::from_int(64) * c.clone() * c.clone() * c.clone() + t.clone() * t
    }
    compute(params, f, |a, b, c| f(&a, &b, &c))
}

/// `24v + β² = 24αγ - 5β²`; nonnegative exactly on the side of the line `v = -β²/24` away from the cusp.
fn l_side<T: Field>(a: &T, b: &T, c: &T) -> T {
    T::from_int(24) * a.clone() * c.clone() - T::from_int(5) * b.clone() * b.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    CaseADistinct,
    CaseADegenerate,
    CaseBInterior,
    CaseBBoundary,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OmegaRegion {
    Omega1,
    Omega2,
    Omega3,
    Omega4,
}

/// The individual inequalities of the two sufficient-and-necessary cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `α < 0`
    AlphaNegative,
    /// `γ ≥ -α²/36`
    GammaAboveLower,
    /// `γ ≤ α²/12`
    GammaBelowUpper,
    /// `Δ(G) ≥ 0`
    DiscGNonnegative,
    /// `γ < 0`
    GammaNegative,
    /// `Δ(G) < 0`
    DiscGNegative,
    /// `64γ³ + (4αγ - β²)² ≥ 0`
    DiscHNonnegative,
    /// `v ≥ -β²/24`
    AboveLineL,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// First inequality of the hyperbolic-`G` case that fails.
    pub case_a_failure: Option<Condition>,
    /// First inequality of the `γ < 0` case that fails.
    pub case_b_failure: Option<Condition>,
    /// Inequalities that hold with equality.
    pub tight: Vec<Condition>,
    /// `Δ(W) ≤ 0`; implied by the `γ < 0` case, reported for reference.
    pub disc_w_nonpositive: bool,
    pub exact: bool,
    /// Whether plain `f64` evaluation of every sign reproduces the verdict.
    pub float_verdict_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: bool,
    pub case: CaseTag,
    pub disc_g: SignedValue,
    pub disc_w: SignedValue,
    pub disc_h: SignedValue,
    pub v: SignedValue,
    pub critical_pattern: RootPattern,
    pub omega_region: Option<OmegaRegion>,
    pub diagnostics: Diagnostics,
}

struct Signs {
    alpha: Ordering,
    gamma: Ordering,
    lower: Ordering,
    upper: Ordering,
    dg: Ordering,
    dh: Ordering,
    l: Ordering,
}

fn decide(s: &Signs) -> (bool, CaseTag, Option<Condition>, Option<Condition>, Vec<Condition>) {
    use Condition::*;
    use Ordering::*;
    let a_checks = [
        (AlphaNegative, s.alpha == Less, false),
        (GammaAboveLower, s.lower != Less, s.lower == Equal),
        (GammaBelowUpper, s.upper != Less, s.upper == Equal),
        (DiscGNonnegative, s.dg != Less, s.dg == Equal),
    ];
    let b_checks = [
        (GammaNegative, s.gamma == Less, false),
        (DiscGNegative, s.dg == Less, false),
        (DiscHNonnegative, s.dh != Less, s.dh == Equal),
        (AboveLineL, s.l != Less, s.l == Equal),
    ];
    let fail_a = a_checks.iter().find(|c| !c.1).map(|c| c.0);
    let fail_b = b_checks.iter().find(|c| !c.1).map(|c| c.0);
    let tight_of = |checks: &[(Condition, bool, bool)]| -> Vec<Condition> {
        checks.iter().filter(|c| c.2).map(|c| c.0).collect()
    };
    let (verdict, case, tight) = if fail_a.is_none() {
        let t = tight_of(&a_checks);
        let case = if t.is_empty() { CaseTag::CaseADistinct } else { CaseTag::CaseADegenerate };
        (true, case, t)
    } else if fail_b.is_none() {
        let t = tight_of(&b_checks);
        let case = if t.is_empty() { CaseTag::CaseBInterior } else { CaseTag::CaseBBoundary };
        (true, case, t)
    } else {
        (false, CaseTag::Fails, Vec::new())
    };
    (verdict, case, fail_a, fail_b, tight)
}

/// Ω-component of a point with `γ < 0`, from the signs of `Δ(G)`, `disc_h` and `24v + β²`.
/// `None` on the separating surfaces `Δ(G) = 0` and `disc_h = 0`.
pub fn omega_from_signs(dg: Ordering, dh: Ordering, l: Ordering) -> Option<OmegaRegion> {
    use Ordering::*;
    match (dg, dh) {
        (Greater, _) => Some(OmegaRegion::Omega4),
        (Less, Less) => Some(OmegaRegion::Omega2),
        (Less, Greater) if l != Less => Some(OmegaRegion::Omega1),
        (Less, Greater) => Some(OmegaRegion::Omega3),
        _ => None,
    }
}

/// Region of the `(γ, v)` plane at fixed `β`, `γ < 0`, as drawn in a region map.
pub fn omega_region_of(beta: f64, gamma: f64, v: f64) -> Option<OmegaRegion> {
    if !(gamma < 0.0) {
        return None;
    }
    let alpha = (v + beta * beta / 4.0) / gamma;
    let p = SymbolParams::new(alpha, beta, gamma).ok()?;
    let dg = disc_g(&p).sign();
    let dh = (4.0 * gamma * gamma * gamma + v * v).partial_cmp(&0.0)?;
    let l = (24.0 * v + beta * beta).partial_cmp(&0.0)?;
    omega_from_signs(dg, dh, l)
}

/// `1 + 96(12γ³ - v²) - 768(v² - 12γ³)² - 512v(36γ³ + v²)`, which equals `-16γ³ Δ(G)`
/// on the slice `β = 1` with `α = (v + 1/4)/γ`.
pub fn disc_g_slice(gamma: f64, v: f64) -> f64 {
    let g3 = gamma * gamma * gamma;
    let v2 = v * v;
    1.0 + 96.0 * (12.0 * g3 - v2) - 768.0 * (v2 - 12.0 * g3).powi(2) - 512.0 * v * (36.0 * g3 + v2)
}

pub fn classify(params: &SymbolParams) -> Result<Classification> {
    let (dg, dg_f) = both(
        params,
        |a, b, c| quartic_discriminant(a, &(q(-2) * b), &(q(3) * c)),
        |a, b, c| quartic_discriminant(&a, &(-2.0 * b), &(3.0 * c)),
    );
    let (dh, dh_f) = (disc_h(params), SignedValue::from_float({
        let (a, b, c) = (params.alpha, params.beta, params.gamma);
        64.0 * c * c * c + (4.0 * a * c - b * b).powi(2)
    }));
    let dw = disc_w(params);
    let (lower, lower_f) = both(params, |a, _, c| q(36) * c + a * a, |a, _, c| 36.0 * c + a * a);
    let (upper, upper_f) = both(params, |a, _, c| a * a - q(12) * c, |a, _, c| a * a - 12.0 * c);
    let (l, l_f) = both(params, l_side, |a, b, c| l_side(&a, &b, &c));
    let v = compute(
        params,
        |a, b, c| a * c - b * b / q(4),
        |a, b, c| a * c - b * b / 4.0,
    );
    let float_sign = |v: f64| v.partial_cmp(&0.0).unwrap_or(Ordering::Equal);

    let exact_signs = Signs {
        alpha: float_sign(params.alpha),
        gamma: float_sign(params.gamma),
        lower: lower.sign(),
        upper: upper.sign(),
        dg: dg.sign(),
        dh: dh.sign(),
        l: l.sign(),
    };
    if exact_signs.gamma == Ordering::Equal {
        return Err(Error::GammaZero);
    }
    let float_signs = Signs {
        alpha: exact_signs.alpha,
        gamma: exact_signs.gamma,
        lower: lower_f.float_sign(),
        upper: upper_f.float_sign(),
        dg: dg_f.float_sign(),
        dh: dh_f.float_sign(),
        l: l_f.float_sign(),
    };
    let (verdict, case, case_a_failure, case_b_failure, tight) = decide(&exact_signs);
    let float_verdict_agrees = decide(&float_signs).0 == verdict;

    let critical_pattern = match params.exact_params() {
        Some(e) => quartic_character(&e.alpha, &(q(-2) * &e.beta), &(q(3) * &e.gamma)),
        None => quartic_character(&params.alpha, &(-2.0 * params.beta), &(3.0 * params.gamma)),
    };
    let omega_region = if exact_signs.gamma == Ordering::Less && exact_signs.dg == Ordering::Less {
        omega_from_signs(exact_signs.dg, exact_signs.dh, exact_signs.l)
    } else {
        None
    };

    Ok(Classification {
        verdict,
        case,
        disc_g: dg,
        disc_w: dw.clone(),
        disc_h: dh,
        v,
        critical_pattern,
        omega_region,
        diagnostics: Diagnostics {
            case_a_failure,
            case_b_failure,
            tight,
            disc_w_nonpositive: dw.sign() != Ordering::Greater,
            exact: params.is_exact(),
            float_verdict_agrees,
        },
    })
}

/// Defining inequalities that hold with equality at these parameters, whichever case
/// they belong to. Nonempty exactly on the boundary surfaces of the classification.
pub fn boundary_conditions(params: &SymbolParams) -> Vec<Condition> {
    let lower = compute(params, |a, _, c| q(36) * c + a * a, |a, _, c| 36.0 * c + a * a);
    let upper = compute(params, |a, _, c| a * a - q(12) * c, |a, _, c| a * a - 12.0 * c);
    let l = compute(params, l_side, |a, b, c| l_side(&a, &b, &c));
    [
        (Condition::GammaAboveLower, lower),
        (Condition::GammaBelowUpper, upper),
        (Condition::DiscGNonnegative, disc_g(params)),
        (Condition::DiscHNonnegative, disc_h(params)),
        (Condition::AboveLineL, l),
    ]
    .into_iter()
    .filter(|(_, v)| v.is_zero())
    .map(|(c, _)| c)
    .collect()
}

/// Roots of `G`, the critical points of the symbol.
pub fn critical_points(params: &SymbolParams) -> Result<RootSet> {
    if params.gamma == 0.0 {
        return Err(Error::GammaZero);
    }
    find_roots(&auxiliary_polys(params).g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularBranch {
    ComplexPairBranch,
    RealAxisBranch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub x: f64,
    pub y: f64,
    pub branch: SingularBranch,
    /// `max(|S|, |S_x|, |S_y|)` at the point, relative to the size of the terms of `S`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPointReport {
    pub points: Vec<SingularPoint>,
    /// `3β² - 8αγ`
    pub three_beta2_minus_8ag: SignedValue,
    pub disc_h: SignedValue,
    pub disc_g: SignedValue,
}

/// Relative tolerance for treating a floating-point branch condition as zero.
const FLOAT_ZERO: f64 = 1e-12;

fn vanishes(v: &SignedValue, scale: f64) -> bool {
    match v.exact {
        Some(_) => v.is_zero(),
        None => v.value.abs() <= FLOAT_ZERO * scale,
    }
}

/// Points where `S = S_x = S_y = 0`, i.e. where the non-real part of the net self-intersects.
pub fn singular_points(params: &SymbolParams) -> Result<SingularPointReport> {
    if params.gamma == 0.0 {
        return Err(Error::GammaZero);
    }
    let (a, b, c) = (params.alpha, params.beta, params.gamma);
    let k = compute(params, |a, b, c| q(3) * b * b - q(8) * a * c, |a, b, c| 3.0 * b * b - 8.0 * a * c);
    let dh = disc_h(params);
    let dg = disc_g(params);
    let k_scale = 3.0 * b * b + 8.0 * (a * c).abs();
    let dh_scale = 64.0 * c.abs().powi(3) + (4.0 * (a * c).abs() + b * b).powi(2);
    let dg_scale = {
        let (qq, rr, ss) = (a.abs(), 2.0 * b.abs(), 3.0 * c.abs());
        4.0 * qq.powi(3) * rr * rr + 27.0 * rr.powi(4) + 16.0 * qq.powi(4) * ss + 144.0 * qq * rr * rr * ss
            + 128.0 * qq * qq * ss * ss
            + 256.0 * ss.powi(3)
    };
    let k_zero = vanishes(&k, k_scale);
    let k_sign = if k_zero { Ordering::Equal } else { k.sign() };

    let s = BivariateS::new(params);
    let mut candidates = Vec::new();
    if k_sign != Ordering::Greater && vanishes(&dh, dh_scale) {
        let x = b / (4.0 * c);
        let y = (8.0 * a * c - 3.0 * b * b).max(0.0).sqrt() / (4.0 * c);
        candidates.push((x, y, SingularBranch::ComplexPairBranch));
        if y != 0.0 {
            candidates.push((x, -y, SingularBranch::ComplexPairBranch));
        }
    }
    if k_sign != Ordering::Less && vanishes(&dg, dg_scale) {
        let root = (3.0 * (3.0 * b * b - 8.0 * a * c)).max(0.0).sqrt();
        for x in [(3.0 * b + root) / (12.0 * c), (3.0 * b - root) / (12.0 * c)] {
            if !candidates.iter().any(|&(px, py, _)| px == x && py == 0.0) {
                candidates.push((x, 0.0, SingularBranch::RealAxisBranch));
            }
        }
    }
    let points = candidates
        .into_iter()
        .map(|(x, y, branch)| SingularPoint {
            x,
            y,
            branch,
            residual: s.singular_residual(x, y),
        })
        .filter(|p| p.residual <= 1e-9)
        .collect();
    Ok(SingularPointReport {
        points,
        three_beta2_minus_8ag: k,
        disc_h: dh,
        disc_g: dg,
    })
}

/// Derivative of the symbol, `b'(z) = G(z) / z²`.
pub fn symbol_derivative(params: &SymbolParams, z: Complex64) -> Complex64 {
    auxiliary_polys(params).g.eval_complex(z) / (z * z)
}

/// Whether the value is exactly zero on the exact path.
pub fn exactly_zero(v: &SignedValue) -> bool {
    v.exact.as_ref().is_some_and(Zero::is_zero)
}
