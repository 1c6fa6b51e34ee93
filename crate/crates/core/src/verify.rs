//! Cross-checks of the exact verdict against numerical witnesses: roots of `P_n`,
//! eigenvalues of `T_n`, enclosing curves of the net and the limiting set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{boundary_conditions, classify, CaseTag, Condition, OmegaRegion};
use crate::error::{Error, Result};
use crate::netcurve::detect_enclosure;
use crate::params::SymbolParams;
use crate::recurrence::PnEvaluator;
use crate::rect::Rect;
use crate::roots::{find_roots_with, real_rootedness, RootOptions};
use crate::toeplitz::{build_tn, eigenvalues, limiting_set};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// All roots of `P_n` real, at a single `n`.
    RootReality,
    /// Some `P_n` with `n ≤ n_max` has a non-real root.
    RootScan,
    Spectrum,
    Enclosure,
    LimitingSet,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::RootReality => "root_reality",
            CheckName::RootScan => "root_scan",
            CheckName::Spectrum => "spectrum",
            CheckName::Enclosure => "enclosure",
            CheckName::LimitingSet => "limiting_set",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Agree,
    Disagree,
    /// The oracle can only confirm non-reality and found none.
    Inconclusive,
    /// Not counted: the parameters sit on a boundary surface.
    Exempt,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    pub rect: Rect,
    pub resolution: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: CheckName,
    pub n: Option<usize>,
    pub grid: Option<GridSpec>,
    /// What the verdict predicts: reality, or an enclosing curve.
    pub predicate: bool,
    pub oracle: bool,
    /// Largest `|Im|` among roots or limit points; for the scan, at the first witness.
    pub measure: Option<f64>,
    pub outcome: Outcome,
    pub agree: bool,
}

impl CheckRecord {
    fn new(check: CheckName, predicate: bool, oracle: bool, one_sided: bool) -> Self {
        let outcome = if predicate == oracle {
            Outcome::Agree
        } else if one_sided && !predicate {
            Outcome::Inconclusive
        } else {
            Outcome::Disagree
        };
        CheckRecord {
            check,
            n: None,
            grid: None,
            predicate,
            oracle,
            measure: None,
            outcome,
            agree: outcome != Outcome::Disagree,
        }
    }

    fn exempt(mut self, on: bool) -> Self {
        if on {
            self.outcome = Outcome::Exempt;
            self.agree = true;
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub params: SymbolParams,
    pub n_max: usize,
    pub tol: f64,
    pub verdict: bool,
    pub case: CaseTag,
    pub omega_region: Option<OmegaRegion>,
    pub checks: Vec<CheckRecord>,
    /// Conjunction of `agree` over all checks.
    pub overall: bool,
    pub boundary: bool,
    pub margin_note: Option<String>,
    /// Set when a check could not be run; `overall` is then `false`.
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn check(&self, name: CheckName) -> Option<&CheckRecord> {
        self.checks.iter().rev().find(|c| c.check == name)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Disagree)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Grid resolution for the enclosure test.
    pub curve_resolution: usize,
    /// Grid resolution for the limiting-set scan; `None` skips it.
    pub limset_resolution: Option<usize>,
    pub limset_eps: f64,
    /// Tolerance multiplier applied on boundary surfaces.
    pub boundary_relax: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            curve_resolution: 512,
            limset_resolution: Some(200),
            limset_eps: 1e-2,
            boundary_relax: 100.0,
        }
    }
}

fn named<T>(check: CheckName, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Check {
        check: check.as_str(),
        source: Box::new(e),
    })
}

/// `(all real within tol, max |Im|)` for the roots of `P_n`.
fn pn_reality(params: &SymbolParams, n: usize, tol: f64) -> Result<(bool, f64)> {
    let rs = find_roots_with(&PnEvaluator::new(params, n), &RootOptions::default())?;
    Ok(real_rootedness(&rs, tol))
}

fn scan_points(n_max: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (10..=n_max).step_by(10).collect();
    if ns.last() != Some(&n_max) {
        ns.push(n_max);
    }
    ns
}

pub fn verify_params(params: &SymbolParams, n_max: usize, tol: f64) -> Result<VerificationReport> {
    verify_params_with(params, n_max, tol, &VerifyOptions::default())
}

pub fn verify_params_with(
    params: &SymbolParams,
    n_max: usize,
    tol: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if n_max < 4 {
        return Err(Error::InvalidInput("n_max must be at least 4".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let cls = classify(params)?;
    let verdict = cls.verdict;
    let on_boundary = boundary_conditions(params);
    let boundary = !on_boundary.is_empty();
    let tol_used = if boundary { tol * opts.boundary_relax } else { tol };
    let mut checks = Vec::new();

    if verdict {
        for n in scan_points(n_max) {
            let (real, imag) = named(CheckName::RootReality, pn_reality(params, n, tol_used))?;
            let mut c = CheckRecord::new(CheckName::RootReality, true, real, false);
            c.n = Some(n);
            c.measure = Some(imag);
            checks.push(c);
        }
    } else {
        // Smallest n with a clearly non-real root.
        let witness = (1..=n_max)
            .into_par_iter()
            .map(|n| pn_reality(params, n, 10.0 * tol_used).map(|(real, imag)| (n, real, imag)))
            .collect::<Result<Vec<_>>>();
        let witness = named(CheckName::RootScan, witness)?.into_iter().find(|w| !w.1);
        let mut c = CheckRecord::new(CheckName::RootScan, false, witness.is_none(), true);
        c.n = Some(witness.map_or(n_max, |w| w.0));
        c.measure = witness.map(|w| w.2);
        checks.push(c);
    }

    let spec = named(CheckName::Spectrum, build_tn(params, n_max).and_then(|t| eigenvalues(&t)))?;
    let scale = spec.spectral_radius().max(1.0);
    let mut c = CheckRecord::new(CheckName::Spectrum, verdict, spec.max_imag <= tol_used * scale, true);
    c.n = Some(n_max);
    c.measure = Some(spec.max_imag);
    checks.push(c);

    let enc = named(CheckName::Enclosure, detect_enclosure(params, opts.curve_resolution))?;
    let mut c = CheckRecord::new(CheckName::Enclosure, verdict, enc.enclosing, false);
    if enc.inconclusive {
        c.outcome = Outcome::Inconclusive;
        c.agree = true;
    }
    c.grid = Some(GridSpec {
        rect: enc.rect,
        resolution: enc.resolution,
    });
    checks.push(c.exempt(boundary));

    if let Some(res) = opts.limset_resolution {
        let half = 1.25 * scale;
        let rect = Rect::centered(half)?;
        let ls = named(CheckName::LimitingSet, limiting_set(params, &rect, res, opts.limset_eps))?;
        let step = ls.step_x.max(ls.step_y);
        let imag = ls.max_abs_imag();
        let mut c = CheckRecord::new(CheckName::LimitingSet, verdict, imag <= 2.0 * step, true);
        c.grid = Some(GridSpec { rect, resolution: res });
        c.measure = Some(imag);
        checks.push(c.exempt(boundary));
    }

    let overall = checks.iter().all(|c| c.agree);
    let margin_note = boundary.then(|| {
        let names: Vec<&str> = on_boundary.iter().map(|c| condition_label(*c)).collect();
        format!(
            "on boundary ({}); tolerance relaxed by {}x, enclosure and limiting set exempt",
            names.join(", "),
            opts.boundary_relax
        )
    });
    Ok(VerificationReport {
        params: params.clone(),
        n_max,
        tol,
        verdict,
        case: cls.case,
        omega_region: cls.omega_region,
        checks,
        overall,
        boundary,
        margin_note,
        error: None,
    })
}

fn condition_label(c: Condition) -> &'static str {
    match c {
        Condition::AlphaNegative => "alpha = 0",
        Condition::GammaAboveLower => "36 gamma + alpha^2 = 0",
        Condition::GammaBelowUpper => "alpha^2 - 12 gamma = 0",
        Condition::DiscGNonnegative | Condition::DiscGNegative => "disc_g = 0",
        Condition::GammaNegative => "gamma = 0",
        Condition::DiscHNonnegative => "disc_h = 0",
        Condition::AboveLineL => "24 alpha gamma - 5 beta^2 = 0",
    }
}

/// Sampling region for [`sweep`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Box in `(α, β, γ)`; `γ = 0` is resampled.
    Params {
        alpha: (f64, f64),
        beta: (f64, f64),
        gamma: (f64, f64),
    },
    /// Box in `(γ, v)` at fixed `β`, with `α = (v + β²/4)/γ`.
    GammaV {
        beta: f64,
        gamma: (f64, f64),
        v: (f64, f64),
    },
}

impl Region {
    fn validate(&self) -> Result<()> {
        let ok = |r: &(f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 <= r.1;
        let fine = match self {
            Region::Params { alpha, beta, gamma } => ok(alpha) && ok(beta) && ok(gamma),
            Region::GammaV { beta, gamma, v } => beta.is_finite() && ok(gamma) && ok(v),
        };
        if fine {
            Ok(())
        } else {
            Err(Error::InvalidInput("region bounds must be finite and ordered".into()))
        }
    }

    /// Parameters of the `samples` points drawn from `seed`. Each is made exact from its
    /// `f64` value so boundary tagging is decided exactly.
    pub fn sample(&self, samples: usize, seed: u64) -> Result<Vec<SymbolParams>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |r: (f64, f64)| if r.0 == r.1 { r.0 } else { rng.random_range(r.0..r.1) };
        let mut out = Vec::with_capacity(samples);
        let mut attempts = 0;
        while out.len() < samples {
            attempts += 1;
            if attempts > 100 * samples + 100 {
                return Err(Error::InvalidInput("region contains only gamma = 0".into()));
            }
            let (a, b, g) = match *self {
                Region::Params { alpha, beta, gamma } => (draw(alpha), draw(beta), draw(gamma)),
                Region::GammaV { beta, gamma, v } => {
                    let g = draw(gamma);
                    let v = draw(v);
                    ((v + beta * beta / 4.0) / g, beta, g)
                }
            };
            if g == 0.0 || !a.is_finite() {
                continue;
            }
            out.push(SymbolParams::exact_from_f64(a, b, g)?);
        }
        Ok(out)
    }
}

/// Verify seeded samples of a region concurrently; reports come back in sample order.
pub fn sweep(region: &Region, samples: usize, n_check: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    sweep_with(region, samples, n_check, seed, 1e-6, &VerifyOptions::default())
}

pub fn sweep_with(
    region: &Region,
    samples: usize,
    n_check: usize,
    seed: u64,
    tol: f64,
    opts: &VerifyOptions,
) -> Result<Vec<VerificationReport>> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    if n_check < 4 {
        return Err(Error::InvalidInput("n_check must be at least 4".into()));
    }
    let points = region.sample(samples, seed)?;
    Ok(points
        .par_iter()
        .map(|p| verify_params_with(p, n_check, tol, opts).unwrap_or_else(|e| failed_report(p, n_check, tol, &e)))
        .collect())
}

fn failed_report(params: &SymbolParams, n_max: usize, tol: f64, e: &Error) -> VerificationReport {
    let cls = classify(params).ok();
    VerificationReport {
        params: params.clone(),
        n_max,
        tol,
        verdict: cls.as_ref().is_some_and(|c| c.verdict),
        case: cls.as_ref().map_or(CaseTag::Fails, |c| c.case),
        omega_region: cls.and_then(|c| c.omega_region),
        checks: Vec::new(),
        overall: false,
        boundary: !boundary_conditions(params).is_empty(),
        margin_note: None,
        error: Some(e.to_string()),
    }
}

/// Counts over a sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub boundary: usize,
    /// Non-boundary points whose checks all agree.
    pub agreeing: usize,
    /// Non-boundary points with an inconclusive check but no disagreement.
    pub inconclusive: usize,
    /// Indices with at least one disagreeing check.
    pub disagreeing: Vec<usize>,
    pub errors: Vec<usize>,
}

pub fn summarize(reports: &[VerificationReport]) -> SweepSummary {
    let mut s = SweepSummary {
        total: reports.len(),
        ..Default::default()
    };
    for (k, r) in reports.iter().enumerate() {
        if r.error.is_some() {
            s.errors.push(k);
        } else if r.boundary {
            s.boundary += 1;
        } else if r.disagreements().next().is_some() {
            s.disagreeing.push(k);
        } else if r.checks.iter().any(|c| c.outcome == Outcome::Inconclusive) {
            s.inconclusive += 1;
        } else {
            s.agreeing += 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_points_include_n_max() {
        assert_eq!(scan_points(35), vec![10, 20, 30, 35]);
        assert_eq!(scan_points(20), vec![10, 20]);
        assert_eq!(scan_points(4), vec![4]);
    }

    #[test]
    fn one_sided_outcomes() {
        assert_eq!(CheckRecord::new(CheckName::Spectrum, false, true, true).outcome, Outcome::Inconclusive);
        assert_eq!(CheckRecord::new(CheckName::Spectrum, true, false, true).outcome, Outcome::Disagree);
        assert_eq!(CheckRecord::new(CheckName::Enclosure, false, true, false).outcome, Outcome::Disagree);
        assert!(CheckRecord::new(CheckName::Enclosure, false, true, false).exempt(true).agree);
    }

    #[test]
    fn rejects_small_n_max() {
        let p = SymbolParams::new(-2.0, 0.2, 0.2).unwrap();
        assert!(verify_params(&p, 3, 1e-6).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let r = Region::Params {
            alpha: (-8.0, 2.0),
            beta: (-3.0, 3.0),
            gamma: (-3.0, 3.0),
        };
        let a = r.sample(5, 7).unwrap();
        let b = r.sample(5, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.is_exact() && p.gamma != 0.0));
    }
}
