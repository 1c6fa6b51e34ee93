//! The polynomial family `P_n = z P_{n-1} + α P_{n-2} + β P_{n-3} + γ P_{n-4}`,
//! with `P_0 = 1` and `P_{-1} = P_{-2} = P_{-3} = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::params::SymbolParams;
use crate::poly::{Poly, RationalPoly, RealPoly};
use crate::roots::{cauchy_radius, Evaluate, Evaluation};

/// `P_0, …, P_{n_max}` over any field.
pub fn generate_sequence_in<T: Field>(alpha: &T, beta: &T, gamma: &T, n_max: usize) -> Vec<Poly<T>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    out.push(vec![T::one()]);
    for n in 1..=n_max {
        let mut c = vec![T::zero(); n + 1];
        for (k, a) in out[n - 1].iter().enumerate() {
            c[k + 1] = a.clone();
        }
        let taps = [(2, alpha), (3, beta), (4, gamma)];
        for (lag, w) in taps {
            if n >= lag {
                for (k, a) in out[n - lag].iter().enumerate() {
                    c[k] = c[k].clone() + w.clone() * a.clone();
                }
            }
        }
        out.push(c);
    }
    out.into_iter().map(Poly::new).collect()
}

pub fn generate_pn_in<T: Field>(alpha: &T, beta: &T, gamma: &T, n: usize) -> Poly<T> {
    generate_sequence_in(alpha, beta, gamma, n).pop().expect("nonempty")
}

/// `P_n` with `f64` coefficients, rounded once from exact arithmetic when the parameters are exact.
pub fn generate_pn(params: &SymbolParams, n: usize) -> RealPoly {
    match params.exact_params() {
        Some(e) => generate_pn_in(&e.alpha, &e.beta, &e.gamma, n).to_f64(),
        None => generate_pn_in(&params.alpha, &params.beta, &params.gamma, n),
    }
}

/// `P_n` in exact rational arithmetic; requires exact parameters.
pub fn generate_pn_exact(params: &SymbolParams, n: usize) -> Result<RationalPoly> {
    let e = params
        .exact_params()
        .ok_or_else(|| Error::InvalidInput("parameters are not exact".into()))?;
    Ok(generate_pn_in(&e.alpha, &e.beta, &e.gamma, n))
}

pub fn generate_sequence(params: &SymbolParams, n_max: usize) -> Vec<RealPoly> {
    match params.exact_params() {
        Some(e) => generate_sequence_in(&e.alpha, &e.beta, &e.gamma, n_max)
            .iter()
            .map(Poly::to_f64)
            .collect(),
        None => generate_sequence_in(&params.alpha, &params.beta, &params.gamma, n_max),
    }
}

/// Evaluates `P_n(z)` and `P_n'(z)` by running the recurrence at `z`.
///
/// This avoids the monomial basis, whose coefficients cancel catastrophically
/// near the real axis for large `n`.
pub struct PnEvaluator {
    n: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
    radius: f64,
}

const RESCALE_ABOVE: f64 = 1e150;

impl PnEvaluator {
    pub fn new(params: &SymbolParams, n: usize) -> Self {
        let coeffs = generate_pn_in(&params.alpha, &params.beta, &params.gamma, n);
        let moduli: Vec<f64> = coeffs.coeffs().iter().map(|c| c.abs()).collect();
        // Roots of P_n are eigenvalues of a matrix with absolute row sums at most this.
        let row_bound = 1.0 + params.alpha.abs() + params.beta.abs() + params.gamma.abs();
        PnEvaluator {
            n,
            alpha: params.alpha,
            beta: params.beta,
            gamma: params.gamma,
            radius: cauchy_radius(&moduli).min(row_bound) * (1.0 + 1e-9),
        }
    }
}

impl Evaluate for PnEvaluator {
    fn degree(&self) -> usize {
        self.n
    }

    fn evaluate(&self, z: Complex64) -> Evaluation {
        let zero = Complex64::new(0.0, 0.0);
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        let (az, aa, ab, ag) = (z.norm(), a.abs(), b.abs(), g.abs());
        // Windows hold indices n-1, n-2, n-3, n-4.
        let mut p = [Complex64::new(1.0, 0.0), zero, zero, zero];
        let mut d = [zero; 4];
        let mut m = [1.0, 0.0, 0.0, 0.0];
        for _ in 0..self.n {
            let pn = z * p[0] + a * p[1] + b * p[2] + g * p[3];
            let dn = p[0] + z * d[0] + a * d[1] + b * d[2] + g * d[3];
            let mn = az * m[0] + aa * m[1] + ab * m[2] + ag * m[3];
            p = [pn, p[0], p[1], p[2]];
            d = [dn, d[0], d[1], d[2]];
            m = [mn, m[0], m[1], m[2]];
            if mn > RESCALE_ABOVE {
                let s = 1.0 / RESCALE_ABOVE;
                for k in 0..4 {
                    p[k] *= s;
                    d[k] *= s;
                    m[k] *= s;
                }
            }
        }
        Evaluation {
            value: p[0],
            derivative: d[0],
            magnitude: m[0],
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
