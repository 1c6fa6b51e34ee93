//! Banded Toeplitz sections `T_n(b)` for `b(z) = -1/z + αz - βz² + γz³`,
//! their spectra, and the limiting set of those spectra.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::dense_eigenvalues;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::params::SymbolParams;
use crate::poly::{ComplexPoly, Poly};
use crate::rect::{grid_node, Rect};
use crate::roots::{cauchy_radius, find_roots_with, Evaluate, Evaluation, HornerEvaluator, RootOptions, RootSet};

/// `n × n` Toeplitz matrix with entry `(i, j) = a_{i-j}` for the listed offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedToeplitz<T> {
    pub n: usize,
    /// `(k, a_k)` pairs; offsets not listed are zero.
    pub bands: Vec<(isize, T)>,
}

impl<T: Field> BandedToeplitz<T> {
    pub fn new(n: usize, bands: Vec<(isize, T)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("section size must be at least 1".into()));
        }
        Ok(BandedToeplitz { n, bands })
    }

    /// Bands of the symbol `-1/z + αz - βz² + γz³`.
    pub fn from_symbol(n: usize, alpha: &T, beta: &T, gamma: &T) -> Result<Self> {
        Self::new(
            n,
            vec![
                (-1, -T::one()),
                (1, alpha.clone()),
                (2, -beta.clone()),
                (3, gamma.clone()),
            ],
        )
    }

    pub fn band(&self, k: isize) -> T {
        self.bands
            .iter()
            .filter(|(o, _)| *o == k)
            .fold(T::zero(), |acc, (_, v)| acc + v.clone())
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.band(i as isize - j as isize)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// `b(z) = Σ a_k z^k`.
    pub fn symbol(&self, z: Complex64) -> Complex64 {
        self.bands
            .iter()
            .map(|(k, v)| v.to_f64_lossy() * z.powi(*k as i32))
            .sum()
    }

    /// The super-diagonal value and the lower bands `a_0, a_1, …`; errors if any
    /// band other than offset -1 lies above the diagonal.
    fn hessenberg_bands(&self) -> Result<(T, Vec<T>)> {
        if self.bands.iter().any(|(k, v)| *k < -1 && !v.is_zero()) {
            return Err(Error::InvalidInput(
                "determinant expansion supports a single super-diagonal".into(),
            ));
        }
        let depth = self.bands.iter().map(|(k, _)| *k).max().unwrap_or(0).max(0) as usize;
        let lower = (0..=depth).map(|d| self.band(d as isize)).collect();
        Ok((self.band(-1), lower))
    }

    /// `det(zI - T_n)` by expansion along the last column, which for a matrix with one
    /// super-diagonal `c` gives `D_k = (z - a_0) D_{k-1} - Σ_{d≥1} c^d a_d D_{k-1-d}`.
    pub fn char_poly(&self) -> Result<Poly<T>> {
        let (c, lower) = self.hessenberg_bands()?;
        let weights = minor_weights(&c, &lower);
        let z_minus_a0 = Poly::new(vec![-lower[0].clone(), T::one()]);
        let mut d: Vec<Poly<T>> = vec![Poly::constant(T::one())];
        for k in 1..=self.n {
            let mut next = &z_minus_a0 * &d[k - 1];
            for (idx, w) in weights.iter().enumerate() {
                let lag = idx + 2;
                if k >= lag && !w.is_zero() {
                    next = &next - &d[k - lag].scale(w);
                }
            }
            d.push(next);
        }
        Ok(d.pop().expect("nonempty"))
    }
}

/// `c^d a_d` for `d ≥ 1`.
fn minor_weights<T: Field>(c: &T, lower: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    let mut cp = T::one();
    for a in lower.iter().skip(1) {
        cp = cp * c.clone();
        out.push(cp.clone() * a.clone());
    }
    out
}

pub fn build_tn(params: &SymbolParams, n: usize) -> Result<BandedToeplitz<f64>> {
    BandedToeplitz::from_symbol(n, &params.alpha, &params.beta, &params.gamma)
}

pub fn build_tn_exact(params: &SymbolParams, n: usize) -> Result<BandedToeplitz<Rational>> {
    let e = params
        .exact_params()
        .ok_or_else(|| Error::InvalidInput("parameters are not exact".into()))?;
    BandedToeplitz::from_symbol(n, &e.alpha, &e.beta, &e.gamma)
}

/// `b(z) = -1/z + αz - βz² + γz³`.
pub fn symbol(params: &SymbolParams, z: Complex64) -> Complex64 {
    -z.inv() + params.alpha * z - params.beta * z * z + params.gamma * z * z * z
}

/// Evaluates `det(zI - T_n)` by the determinant expansion at a point.
pub struct CharPolyEvaluator {
    n: usize,
    a0: f64,
    weights: Vec<f64>,
    radius: f64,
}

impl CharPolyEvaluator {
    pub fn new(t: &BandedToeplitz<f64>) -> Result<Self> {
        let (c, lower) = t.hessenberg_bands()?;
        let weights = minor_weights(&c, &lower);
        let moduli: Vec<f64> = t.char_poly()?.coeffs().iter().map(|v| v.abs()).collect();
        // Row sums bound the spectral radius; the Cauchy radius is usually sharper.
        let row_bound: f64 = t.bands.iter().map(|(_, v)| v.abs()).sum();
        let radius = cauchy_radius(&moduli).min(row_bound) * (1.0 + 1e-9);
        Ok(CharPolyEvaluator {
            n: t.n,
            a0: lower[0],
            weights,
            radius,
        })
    }
}

impl Evaluate for CharPolyEvaluator {
    fn degree(&self) -> usize {
        self.n
    }

    fn evaluate(&self, z: Complex64) -> Evaluation {
        let w = self.weights.len();
        let zero = Complex64::new(0.0, 0.0);
        let shifted = z - self.a0;
        let abs_shifted = shifted.norm();
        // Histories of D, D' and the absolute-value recurrence, newest first.
        let mut dv = vec![zero; w + 1];
        let mut dd = vec![zero; w + 1];
        let mut dm = vec![0.0; w + 1];
        dv[0] = Complex64::new(1.0, 0.0);
        dm[0] = 1.0;
        for _ in 0..self.n {
            let mut v = shifted * dv[0];
            let mut d = dv[0] + shifted * dd[0];
            let mut m = abs_shifted * dm[0];
            for (idx, wt) in self.weights.iter().enumerate() {
                v -= wt * dv[idx + 1];
                d -= wt * dd[idx + 1];
                m += wt.abs() * dm[idx + 1];
            }
            dv.rotate_right(1);
            dd.rotate_right(1);
            dm.rotate_right(1);
            dv[0] = v;
            dd[0] = d;
            dm[0] = m;
            if m > 1e150 {
                for k in 0..=w {
                    dv[k] *= 1e-150;
                    dd[k] *= 1e-150;
                    dm[k] *= 1e-150;
                }
            }
        }
        Evaluation {
            value: dv[0],
            derivative: dd[0],
            magnitude: dm[0],
            noise: 0.0,
        }
    }

    fn root_radius(&self) -> f64 {
        self.radius
    }

    fn is_real(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    CharPolyRoots,
    DenseEigen,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    pub max_imag: f64,
    pub method: SpectrumMethod,
}

impl SpectrumResult {
    fn new(eigenvalues: Vec<Complex64>, method: SpectrumMethod) -> Self {
        let max_imag = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        SpectrumResult {
            eigenvalues,
            max_imag,
            method,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Eigenvalues as roots of `det(zI - T_n)`, evaluated by the determinant expansion.
pub fn eigenvalues(t: &BandedToeplitz<f64>) -> Result<SpectrumResult> {
    let rs = find_roots_with(&CharPolyEvaluator::new(t)?, &RootOptions::default())?;
    Ok(SpectrumResult::new(rs.roots, SpectrumMethod::CharPolyRoots))
}

/// Eigenvalues by dense balancing, Hessenberg reduction and QR. `O(n³)`; meant as an
/// independent cross-check at moderate `n`.
pub fn eigenvalues_dense(t: &BandedToeplitz<f64>) -> Result<SpectrumResult> {
    let ev = dense_eigenvalues(&t.to_dense())?;
    Ok(SpectrumResult::new(ev, SpectrumMethod::DenseEigen))
}

/// How the gap between the two smallest root moduli is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMetric {
    /// `(|z_2| - |z_1|) / |z_2|`, invariant under rescaling of `z`.
    #[default]
    Relative,
    /// `|z_2| - |z_1|`.
    Absolute,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LimitPoint {
    pub lambda: Complex64,
    pub gap: f64,
}

/// Grid sample of the limiting set: nodes `λ` where the two smallest root moduli of
/// `z(b(z) - λ) = γz⁴ - βz³ + αz² - λz - 1` agree up to `eps`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitingSetSample {
    pub rect: Rect,
    pub resolution: usize,
    pub eps: f64,
    pub metric: GapMetric,
    pub step_x: f64,
    pub step_y: f64,
    /// Accepted nodes in row-major order (rows of constant `Im λ`, bottom to top).
    pub points: Vec<LimitPoint>,
    pub scanned: usize,
    /// Nodes where the quartic's roots did not converge.
    pub skipped: usize,
}

impl LimitingSetSample {
    pub fn max_abs_imag(&self) -> f64 {
        self.points.iter().fold(0.0, |m, p| m.max(p.lambda.im.abs()))
    }
}

/// Root moduli of `γz⁴ - βz³ + αz² - λz - 1`, ascending.
pub fn symbol_moduli(params: &SymbolParams, lambda: Complex64) -> Result<Vec<f64>> {
    let p: ComplexPoly = Poly::new(vec![
        Complex64::new(-1.0, 0.0),
        -lambda,
        Complex64::new(params.alpha, 0.0),
        Complex64::new(-params.beta, 0.0),
        Complex64::new(params.gamma, 0.0),
    ]);
    let rs: RootSet = find_roots_with(&HornerEvaluator::new(&p)?, &RootOptions::default())?;
    let mut m: Vec<f64> = rs.roots.iter().map(|z| z.norm()).collect();
    m.sort_by(f64::total_cmp);
    Ok(m)
}

pub fn limiting_gap(moduli: &[f64], metric: GapMetric) -> f64 {
    let d = moduli[1] - moduli[0];
    match metric {
        GapMetric::Absolute => d,
        GapMetric::Relative => {
            if moduli[1] > 0.0 {
                d / moduli[1]
            } else {
                0.0
            }
        }
    }
}

pub fn limiting_set(params: &SymbolParams, rect: &Rect, resolution: usize, eps: f64) -> Result<LimitingSetSample> {
    limiting_set_with(params, rect, resolution, eps, GapMetric::default())
}

pub fn limiting_set_with(
    params: &SymbolParams,
    rect: &Rect,
    resolution: usize,
    eps: f64,
    metric: GapMetric,
) -> Result<LimitingSetSample> {
    if resolution < 2 {
        return Err(Error::InvalidInput("resolution must be at least 2".into()));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidInput("eps must be nonnegative".into()));
    }
    let res = resolution;
    let rows: Vec<(Vec<LimitPoint>, usize)> = (0..=res)
        .into_par_iter()
        .map(|j| {
            let y = grid_node(rect.y0, rect.y1, j, res);
            let mut acc = Vec::new();
            let mut skipped = 0;
            for i in 0..=res {
                let lambda = Complex64::new(grid_node(rect.x0, rect.x1, i, res), y);
                match symbol_moduli(params, lambda) {
                    Ok(m) => {
                        let gap = limiting_gap(&m, metric);
                        if gap < eps {
                            acc.push(LimitPoint { lambda, gap });
                        }
                    }
                    Err(_) => skipped += 1,
                }
            }
            (acc, skipped)
        })
        .collect();
    let skipped = rows.iter().map(|r| r.1).sum();
    let points = rows.into_iter().flat_map(|r| r.0).collect();
    Ok(LimitingSetSample {
        rect: *rect,
        resolution: res,
        eps,
        metric,
        step_x: rect.width() / res as f64,
        step_y: rect.height() / res as f64,
        points,
        scanned: (res + 1) * (res + 1),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    #[test]
    fn small_sections() {
        let p = SymbolParams::new(-4.0, 0.0, 1.0).unwrap();
        assert_eq!(build_tn(&p, 1).unwrap().to_dense(), vec![vec![0.0]]);
        assert_eq!(
            build_tn(&p, 2).unwrap().to_dense(),
            vec![vec![0.0, -1.0], vec![-4.0, 0.0]]
        );
        let q = SymbolParams::new(2.0, 3.0, 5.0).unwrap();
        let t = build_tn(&q, 5).unwrap().to_dense();
        assert_eq!(&t[3][..5], &[5.0, -3.0, 2.0, 0.0, -1.0]);
    }

    #[test]
    fn char_poly_small() {
        let p = SymbolParams::exact(int(-4), int(0), int(1)).unwrap();
        assert_eq!(build_tn_exact(&p, 1).unwrap().char_poly().unwrap(), Poly::new(vec![int(0), int(1)]));
        assert_eq!(
            build_tn_exact(&p, 2).unwrap().char_poly().unwrap(),
            Poly::new(vec![int(-4), int(0), int(1)])
        );
        let q = SymbolParams::exact(int(-2), int(1), int(-1)).unwrap();
        assert_eq!(
            build_tn_exact(&q, 4).unwrap().char_poly().unwrap().into_coeffs(),
            vec![int(3), int(2), int(-6), int(0), int(1)]
        );
    }

    #[test]
    fn char_poly_matches_dense_determinant() {
        use crate::poly::determinant;
        let q = SymbolParams::exact(rat(-3, 2), rat(2, 3), rat(1, 5)).unwrap();
        let t = build_tn_exact(&q, 6).unwrap();
        let cp = t.char_poly().unwrap();
        for zv in [-2i64, 0, 1, 3] {
            let z = int(zv);
            let mut m = t.to_dense();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if i == j { z.clone() - v.clone() } else { -v.clone() };
                }
            }
            assert_eq!(determinant(m), cp.eval(&z));
        }
    }

    #[test]
    fn spectra_small() {
        let p = SymbolParams::new(-4.0, 0.0, 1.0).unwrap();
        let s = eigenvalues(&build_tn(&p, 1).unwrap()).unwrap();
        assert!(s.eigenvalues[0].norm() < 1e-300 || s.eigenvalues[0].norm() < 1e-12);
        let s = eigenvalues(&build_tn(&p, 2).unwrap()).unwrap();
        let mut re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.0).abs() < 1e-13 && (re[1] - 2.0).abs() < 1e-13);
        assert_eq!(s.method, SpectrumMethod::CharPolyRoots);
    }

    #[test]
    fn symbol_matches_bands() {
        let p = SymbolParams::new(-1.5, 0.25, 2.0).unwrap();
        let t = build_tn(&p, 3).unwrap();
        let z = Complex64::new(0.7, -0.4);
        assert!((t.symbol(z) - symbol(&p, z)).norm() < 1e-14);
    }

    #[test]
    fn limiting_set_rejects_bad_input() {
        let p = SymbolParams::new(-1.0, 0.0, 1.0).unwrap();
        let r = Rect::centered(1.0).unwrap();
        assert!(limiting_set(&p, &r, 1, 0.1).is_err());
        assert!(limiting_set(&p, &r, 10, -1.0).is_err());
        let s = limiting_set(&p, &r, 10, 0.0).unwrap();
        assert_eq!(s.scanned, 121);
    }
}
