use std::cmp::Ordering;

use hyperzero::classifier::{
    classify, critical_points, disc_g, disc_g_factor, disc_g_slice, omega_region_of, OmegaRegion,
};
use hyperzero::field::{int, rat};
use hyperzero::{quartic_character, Field, Rational, SymbolParams};
use num_traits::Zero;
use proptest::prelude::*;

fn exact(a: Rational, b: Rational, c: Rational) -> SymbolParams {
    SymbolParams::exact(a, b, c).unwrap()
}

fn rational_params() -> impl Strategy<Value = SymbolParams> {
    let r = |lo: i64, hi: i64| (lo..=hi, 1i64..=8).prop_map(|(n, d)| rat(n, d));
    (r(-64, 16), r(-24, 24), r(-24, 24))
        .prop_filter("gamma must be nonzero", |(_, _, c)| !c.is_zero())
        .prop_map(|(a, b, c)| exact(a, b, c))
}

#[test]
fn hyperbolic_g_matches_case_a_inequalities() {
    let mut checked = 0;
    let mut hyperbolic = 0;
    for a in [-7, -5, -3, -2, -1] {
        for b in [-3, -1, 0, 1, 2] {
            for c in [-6, -3, -1, 1, 2, 4, 6, 9] {
                let (alpha, beta, gamma) = (rat(a * 2, 3), rat(b, 2), rat(c, 8));
                let j = quartic_character(&alpha, &(int(-2) * &beta), &(int(3) * &gamma)).all_real();
                let p = exact(alpha.clone(), beta, gamma.clone());
                let ineq = alpha.sign() == Ordering::Less
                    && (int(36) * &gamma + &alpha * &alpha).sign() != Ordering::Less
                    && (&alpha * &alpha - int(12) * &gamma).sign() != Ordering::Less
                    && disc_g(&p).sign() != Ordering::Less;
                assert_eq!(j, ineq, "{:?}", p.display());
                let c = classify(&p).unwrap();
                if ineq {
                    assert!(c.verdict);
                    hyperbolic += 1;
                }
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 200);
    assert!(hyperbolic > 20 && hyperbolic < 180, "grid should cover both sides: {hyperbolic}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lemma_factor_is_a_sixteenth(p in rational_params()) {
        let d = disc_g(&p).exact.unwrap();
        let f = disc_g_factor(&p).exact.unwrap();
        prop_assert_eq!(d, int(16) * f);
    }

    #[test]
    fn float_signs_agree_away_from_boundaries(p in rational_params()) {
        let c = classify(&p).unwrap();
        // Relative size of each defining expression; all comfortably away from zero.
        let (a, b, g) = (p.alpha, p.beta, p.gamma);
        let margins = [
            (36.0 * g + a * a) / (36.0 * g.abs() + a * a),
            (a * a - 12.0 * g) / (12.0 * g.abs() + a * a),
            (24.0 * a * g - 5.0 * b * b) / (24.0 * (a * g).abs() + 5.0 * b * b).max(f64::MIN_POSITIVE),
            c.disc_g.value / disc_scale(a, b, g),
            c.disc_h.value / (64.0 * g.abs().powi(3) + (4.0 * (a * g).abs() + b * b).powi(2)),
        ];
        prop_assume!(margins.iter().all(|m| m.abs() > 1e-9));
        prop_assert!(c.diagnostics.float_verdict_agrees);
    }

    #[test]
    fn real_critical_points_straddle_zero_iff_gamma_negative(p in rational_params()) {
        prop_assume!(disc_g(&p).sign() == Ordering::Less);
        let rs = critical_points(&p).unwrap();
        let scale = rs.max_modulus().max(1.0);
        let real: Vec<f64> = rs.roots.iter().filter(|z| z.im.abs() <= 1e-9 * scale).map(|z| z.re).collect();
        prop_assert_eq!(real.len(), 2);
        prop_assert_eq!(real[0] * real[1] < 0.0, p.gamma < 0.0);
    }

    #[test]
    fn verdict_is_weighted_homogeneous(p in rational_params(), k in 0usize..4) {
        let t = [rat(1, 3), rat(1, 2), int(2), int(3)][k].clone();
        let base = classify(&p).unwrap();
        let scaled = classify(&p.scaled_exact(&t).unwrap()).unwrap();
        prop_assert_eq!(base.verdict, scaled.verdict);
        prop_assert_eq!(base.case, scaled.case);
        prop_assert_eq!(base.omega_region, scaled.omega_region);
    }

    #[test]
    fn slice_formula_tracks_disc_g(gamma in -2.0f64..-0.01, v in -1.0f64..1.0) {
        let alpha = (v + 0.25) / gamma;
        let p = SymbolParams::new(alpha, 1.0, gamma).unwrap();
        let want = -16.0 * gamma.powi(3) * disc_g(&p).value;
        let lhs = disc_g_slice(gamma, v);
        prop_assert!((lhs - want).abs() <= 1e-9 * (1.0 + want.abs() + 768.0 * (v * v + 12.0 * gamma.abs().powi(3)).powi(2)));
    }
}

fn disc_scale(a: f64, b: f64, g: f64) -> f64 {
    let (q, r, s) = (a.abs(), 2.0 * b.abs(), 3.0 * g.abs());
    (4.0 * q.powi(3) * r * r + 27.0 * r.powi(4) + 16.0 * q.powi(4) * s + 144.0 * q * r * r * s
        + 128.0 * q * q * s * s
        + 256.0 * s.powi(3))
    .max(f64::MIN_POSITIVE)
}

#[test]
fn region_map_fixture_points() {
    assert_eq!(omega_region_of(1.0, -0.2, 0.4), Some(OmegaRegion::Omega1));
    assert_eq!(omega_region_of(1.0, -1.0 / 3.0, -0.1), Some(OmegaRegion::Omega2));
    let p = exact(rat(-9, 20), int(1), rat(-1, 3));
    assert_eq!(p.v_exact().unwrap(), rat(-1, 10));
    assert_eq!(classify(&p).unwrap().omega_region, Some(OmegaRegion::Omega2));
}

#[test]
fn exact_and_float_inputs_agree_on_fixtures() {
    for (a, b, c) in [("-27/4", "-7/8", "5/2"), ("3/4", "1", "-1/5"), ("-13/4", "1", "-1/5")] {
        let e = SymbolParams::parse(a, b, c).unwrap();
        let f = SymbolParams::new(e.alpha, e.beta, e.gamma).unwrap();
        assert_eq!(classify(&e).unwrap().verdict, classify(&f).unwrap().verdict);
        assert!(classify(&e).unwrap().diagnostics.float_verdict_agrees);
    }
}
