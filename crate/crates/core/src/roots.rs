//! Simultaneous (Aberth–Ehrlich) root finding over an abstract evaluator.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Value and derivative of a polynomial at a point, with its rounding scale.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    pub derivative: Complex64,
    /// Same units as `value`; `|value| / magnitude` is a relative backward error.
    pub magnitude: f64,
    /// Values at or below this level are indistinguishable from zero.
    pub noise: f64,
}

/// Anything that can evaluate a fixed polynomial and its derivative.
///
/// `value`, `derivative`, `magnitude` and `noise` may share a common positive
/// scale factor, which lets evaluators rescale to avoid overflow.
pub trait Evaluate: Sync {
    fn degree(&self) -> usize;
    fn evaluate(&self, z: Complex64) -> Evaluation;
    /// An upper bound on the moduli of all roots.
    fn root_radius(&self) -> f64;
    /// Real coefficients, so roots come in conjugate pairs.
    fn is_real(&self) -> bool;
}

/// Horner evaluation of an explicit coefficient vector.
pub struct HornerEvaluator {
    coeffs: Vec<Complex64>,
    real: bool,
    radius: f64,
}

impl HornerEvaluator {
    pub fn new<T: Copy + Zero + Into<Complex64>>(p: &Poly<T>) -> Result<Self> {
        let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let coeffs: Vec<Complex64> = p.coeffs().iter().map(|&c| c.into()).collect();
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let real = coeffs.iter().all(|c| c.im == 0.0);
        let moduli: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
        let radius = cauchy_radius(&moduli);
        Ok(HornerEvaluator { coeffs, real, radius })
    }
}

impl Evaluate for HornerEvaluator {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn evaluate(&self, z: Complex64) -> Evaluation {
        let r = z.norm();
        let mut p = Complex64::zero();
        let mut d = Complex64::zero();
        let mut m = 0.0;
        for c in self.coeffs.iter().rev() {
            d = d * z + p;
            p = p * z + c;
            m = m * r + c.norm();
        }
        Evaluation {
            value: p,
            derivative: d,
            magnitude: m,
            noise: 4.0 * f64::EPSILON * m,
        }
    }

    fn root_radius(&self) -> f64 {
        self.radius
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// Cauchy radius: the unique positive root of `|a_n| x^n = Σ_{k<n} |a_k| x^k`,
/// given coefficient moduli in ascending order. Every root lies in the closed disk.
pub fn cauchy_radius(moduli: &[f64]) -> f64 {
    let n = moduli.len() - 1;
    let lead = moduli[n];
    let terms: Vec<(i32, f64)> = moduli[..n]
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(k, &m)| ((k as i32) - (n as i32), (m / lead).ln()))
        .collect();
    if terms.is_empty() {
        return 0.0;
    }
    // Fujiwara's bound brackets the root from above.
    let fujiwara = terms
        .iter()
        .map(|&(e, l)| {
            let k = -e as f64;
            let l = if e == -(n as i32) { l - std::f64::consts::LN_2 } else { l };
            l / k
        })
        .fold(f64::NEG_INFINITY, f64::max)
        + std::f64::consts::LN_2;
    // f(x) = Σ |a_k/a_n| x^{k-n} - 1 is decreasing in x; bisect on ln x.
    let f = |lx: f64| terms.iter().map(|&(e, l)| (l + e as f64 * lx).exp()).sum::<f64>() - 1.0;
    let mut hi = fujiwara;
    let mut lo = hi - 1.0;
    while f(lo) < 0.0 {
        hi = lo;
        lo -= 1.0 + (hi - lo);
        if lo < -700.0 {
            return 0.0;
        }
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.exp()
}

#[derive(Clone, Debug)]
pub struct RootOptions {
    pub max_sweeps: usize,
    /// A root is converged once its Aberth step is below `step_tol · radius`.
    pub step_tol: f64,
    pub polish: bool,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_sweeps: 200,
            step_tol: 1e-14,
            polish: true,
        }
    }
}

/// Roots of a polynomial with per-root diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// Size of the cluster each root belongs to.
    pub multiplicities: Vec<usize>,
    pub max_imag: f64,
    /// Relative backward error `|p(z)| / Σ|a_k||z|^k` per root.
    pub residuals: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

impl RootSet {
    fn assemble(roots: Vec<Complex64>, residuals: Vec<f64>, sweeps: usize, converged: bool) -> Self {
        let scale = roots.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let multiplicities = cluster_sizes(&roots, default_cluster_radius(scale));
        let max_imag = roots.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        RootSet {
            roots,
            multiplicities,
            max_imag,
            residuals,
            sweeps,
            converged,
        }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Groups of root indices lying within `radius` of each other (single linkage).
    pub fn clusters(&self, radius: f64) -> Vec<Vec<usize>> {
        clusters(&self.roots, radius)
    }

    /// Roots sorted by real part, then imaginary part.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.roots.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

pub fn default_cluster_radius(scale: f64) -> f64 {
    1e-7f64.max(1e-7 * scale)
}

fn clusters(roots: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn cluster_sizes(roots: &[Complex64], radius: f64) -> Vec<usize> {
    let mut sizes = vec![1; roots.len()];
    for g in clusters(roots, radius) {
        for &i in &g {
            sizes[i] = g.len();
        }
    }
    sizes
}

/// All roots of an explicit polynomial, evaluated by Horner's rule.
pub fn find_roots<T: Copy + Zero + Into<Complex64>>(p: &Poly<T>) -> Result<RootSet> {
    find_roots_with(&HornerEvaluator::new(p)?, &RootOptions::default())
}

/// Aberth–Ehrlich iteration in Gauss–Seidel order, started on a perturbed circle.
pub fn find_roots_with<E: Evaluate + ?Sized>(e: &E, opts: &RootOptions) -> Result<RootSet> {
    let n = e.degree();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let radius = e.root_radius().max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut frozen = vec![false; n];
    let mut last_step = vec![f64::INFINITY; n];
    let step_floor = opts.step_tol * radius;
    let stagnation = 1e-6 * radius;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps && frozen.iter().any(|f| !f) {
        sweeps += 1;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let ev = e.evaluate(z[i]);
            if ev.value.norm() <= ev.noise {
                frozen[i] = true;
                continue;
            }
            let ratio = ev.value / ev.derivative;
            let mut s = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (z[i] - zj).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let w = if denom.norm() > 0.0 && ratio.is_finite() {
                ratio / denom
            } else {
                // Derivative vanished: nudge off the critical point.
                Complex64::from_polar(step_floor.max(1e-8 * radius), 1.0 + i as f64)
            };
            if !w.is_finite() {
                frozen[i] = true;
                continue;
            }
            z[i] -= w;
            let step = w.norm();
            if step <= step_floor || (step <= stagnation && step >= 0.9 * last_step[i]) {
                frozen[i] = true;
            }
            last_step[i] = step;
        }
    }
    let converged = frozen.iter().all(|&f| f);
    if opts.polish {
        for zi in z.iter_mut() {
            let ev = e.evaluate(*zi);
            if ev.derivative.norm() == 0.0 {
                continue;
            }
            let cand = *zi - ev.value / ev.derivative;
            let ev2 = e.evaluate(cand);
            if cand.is_finite() && ev2.value.norm() / ev2.magnitude < ev.value.norm() / ev.magnitude {
                *zi = cand;
            }
        }
    }
    if e.is_real() {
        symmetrize(&mut z, radius.max(1.0));
    }
    let residuals = z
        .iter()
        .map(|&zi| {
            let ev = e.evaluate(zi);
            if ev.magnitude > 0.0 {
                ev.value.norm() / ev.magnitude
            } else {
                0.0
            }
        })
        .collect();
    let set = RootSet::assemble(z, residuals, sweeps, converged);
    if converged {
        Ok(set)
    } else {
        Err(Error::NoConvergence {
            sweeps,
            partial: Box::new(set),
        })
    }
}

/// Pair each root in the upper half-plane with the nearest root in the lower
/// one and replace both by an exact conjugate pair. Near-real roots are left as found.
fn symmetrize(z: &mut [Complex64], scale: f64) {
    let real_band = 4e-10 * scale;
    let pair_tol = 1e-6 * scale;
    let upper: Vec<usize> = (0..z.len()).filter(|&i| z[i].im > real_band).collect();
    let mut used = vec![false; z.len()];
    for i in upper {
        let target = z[i].conj();
        let best = (0..z.len())
            .filter(|&j| !used[j] && z[j].im < -real_band)
            .min_by(|&a, &b| (z[a] - target).norm().total_cmp(&(z[b] - target).norm()));
        if let Some(j) = best {
            if (z[j] - target).norm() <= pair_tol {
                used[j] = true;
                let m = 0.5 * (z[i] + z[j].conj());
                z[i] = m;
                z[j] = m.conj();
            }
        }
    }
}

/// Whether every root satisfies `|Im| ≤ tol · max(1, max|root|)`; also returns the largest `|Im|`.
pub fn is_real_rooted<T: Copy + Zero + Into<Complex64>>(p: &Poly<T>, tol: f64) -> Result<(bool, f64)> {
    is_real_rooted_with(&HornerEvaluator::new(p)?, tol)
}

pub fn is_real_rooted_with<E: Evaluate + ?Sized>(e: &E, tol: f64) -> Result<(bool, f64)> {
    let rs = find_roots_with(e, &RootOptions::default())?;
    Ok(real_rootedness(&rs, tol))
}

pub fn real_rootedness(rs: &RootSet, tol: f64) -> (bool, f64) {
    let bound = tol * rs.max_modulus().max(1.0);
    (rs.max_imag <= bound, rs.max_imag)
}

/// Root configuration of a real quartic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootPattern {
    TwoRealPairComplex,
    FourDistinctReal,
    AllComplexDistinct,
    OneDoubleTwoRealSimple,
    DoubleRealPlusComplexPair,
    TwoDoubleReal,
    TripleRealPlusSimple,
    QuadrupleReal,
    TwoDoubleComplexPairs,
}

impl RootPattern {
    pub fn all_real(self) -> bool {
        matches!(
            self,
            RootPattern::FourDistinctReal
                | RootPattern::OneDoubleTwoRealSimple
                | RootPattern::TwoDoubleReal
                | RootPattern::TripleRealPlusSimple
                | RootPattern::QuadrupleReal
        )
    }

    pub fn has_multiple_root(self) -> bool {
        !matches!(
            self,
            RootPattern::TwoRealPairComplex | RootPattern::FourDistinctReal | RootPattern::AllComplexDistinct
        )
    }
}

/// Classify a set of four roots by clustering at `radius`; a cluster is real when
/// its centre has `|Im| ≤ radius`. Returns `None` for configurations no real quartic has.
pub fn pattern_from_roots(roots: &[Complex64], radius: f64) -> Option<RootPattern> {
    if roots.len() != 4 {
        return None;
    }
    let mut real_mults = Vec::new();
    let mut complex_mults = Vec::new();
    for g in clusters(roots, radius) {
        let c = g.iter().map(|&i| roots[i]).sum::<Complex64>() / g.len() as f64;
        if c.im.abs() <= radius {
            real_mults.push(g.len());
        } else {
            complex_mults.push(g.len());
        }
    }
    real_mults.sort_unstable();
    complex_mults.sort_unstable();
    use RootPattern::*;
    let pattern = match (real_mults.as_slice(), complex_mults.as_slice()) {
        ([1, 1], [1, 1]) => TwoRealPairComplex,
        ([1, 1, 1, 1], []) => FourDistinctReal,
        ([], [1, 1, 1, 1]) => AllComplexDistinct,
        ([1, 1, 2], []) => OneDoubleTwoRealSimple,
        ([2], [1, 1]) => DoubleRealPlusComplexPair,
        ([2, 2], []) => TwoDoubleReal,
        ([1, 3], []) => TripleRealPlusSimple,
        ([4], []) => QuadrupleReal,
        ([], [2, 2]) => TwoDoubleComplexPairs,
        _ => return None,
    };
    Some(pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ComplexPoly, RealPoly};
    use approx::assert_abs_diff_eq;

    fn rp(c: &[f64]) -> RealPoly {
        Poly::new(c.to_vec())
    }

    #[test]
    fn quadratic_roots() {
        let rs = find_roots(&rp(&[-4.0, 0.0, 1.0])).unwrap();
        let s = rs.sorted();
        assert_abs_diff_eq!(s[0].re, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s[1].re, 2.0, epsilon = 1e-14);
        assert_eq!(rs.max_imag, 0.0);

        let rs = find_roots(&rp(&[1.0, 0.0, 1.0])).unwrap();
        let s = rs.sorted();
        assert_abs_diff_eq!(s[0].im.abs(), 1.0, epsilon = 1e-14);
        assert_eq!(s[0], s[1].conj());
    }

    #[test]
    fn double_roots_are_clustered() {
        // (z^2 - 1)^2
        let rs = find_roots(&rp(&[1.0, 0.0, -2.0, 0.0, 1.0])).unwrap();
        assert!(rs.multiplicities.iter().all(|&m| m == 2));
        for z in &rs.roots {
            assert!((z.re.abs() - 1.0).abs() < 1e-7 && z.im.abs() < 1e-7);
        }
        assert_eq!(
            pattern_from_roots(&rs.roots, 1e-6),
            Some(RootPattern::TwoDoubleReal)
        );
    }

    #[test]
    fn triple_root_is_located() {
        // -(z-1)^3 (3z+1) = -3z^4 + 8z^3 - 6z^2 + 1
        let rs = find_roots(&rp(&[1.0, 0.0, -6.0, 8.0, -3.0])).unwrap();
        let near_one = rs.roots.iter().filter(|z| (*z - 1.0).norm() < 1e-4).count();
        assert_eq!(near_one, 3);
        assert!(rs.roots.iter().any(|z| (z + 1.0 / 3.0).norm() < 1e-12));
    }

    #[test]
    fn errors() {
        assert!(matches!(find_roots(&rp(&[3.0])), Err(Error::ConstantPolynomial)));
        assert!(matches!(find_roots(&RealPoly::zero()), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn linear_and_zero_roots() {
        let rs = find_roots(&rp(&[0.0, 0.0, 1.0])).unwrap();
        assert!(rs.roots.iter().all(|z| z.norm() < 1e-7));
        let rs = find_roots(&rp(&[3.0, 2.0])).unwrap();
        assert_abs_diff_eq!(rs.roots[0].re, -1.5, epsilon = 1e-15);
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z - 2)
        let i = Complex64::i();
        let p: ComplexPoly = Poly::new(vec![2.0 * i, -(2.0 + i), Complex64::new(1.0, 0.0)]);
        let rs = find_roots(&p).unwrap();
        assert!(rs.roots.iter().any(|z| (z - i).norm() < 1e-13));
        assert!(rs.roots.iter().any(|z| (z - 2.0).norm() < 1e-13));
    }

    #[test]
    fn real_rootedness_predicate() {
        assert_eq!(is_real_rooted(&rp(&[-4.0, 0.0, 1.0]), 1e-8).unwrap(), (true, 0.0));
        let (ok, im) = is_real_rooted(&rp(&[1.0, 0.0, 1.0]), 1e-8).unwrap();
        assert!(!ok);
        assert_abs_diff_eq!(im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cauchy_radius_is_tight() {
        // z^2 - 4: radius 2 exactly
        assert_abs_diff_eq!(cauchy_radius(&[4.0, 0.0, 1.0]), 2.0, epsilon = 1e-12);
        // z^n alone
        assert_eq!(cauchy_radius(&[0.0, 0.0, 1.0]), 0.0);
        // radius bounds the roots of (z-1)(z-2)(z-3)
        let r = cauchy_radius(&[6.0, 11.0, 6.0, 1.0]);
        assert!((3.0..12.0).contains(&r));
    }

    #[test]
    fn patterns_from_explicit_roots() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        use RootPattern::*;
        let cases = [
            (vec![c(1., 0.), c(2., 0.), c(0., 1.), c(0., -1.)], TwoRealPairComplex),
            (vec![c(1., 0.), c(1., 0.), c(1., 0.), c(-3., 0.)], TripleRealPlusSimple),
            (vec![c(0., 1.), c(0., 1.), c(0., -1.), c(0., -1.)], TwoDoubleComplexPairs),
            (vec![c(0., 0.); 4], QuadrupleReal),
            (vec![c(2., 0.), c(2., 0.), c(0., 1.), c(0., -1.)], DoubleRealPlusComplexPair),
        ];
        for (roots, want) in cases {
            assert_eq!(pattern_from_roots(&roots, 1e-6), Some(want));
        }
    }
}
