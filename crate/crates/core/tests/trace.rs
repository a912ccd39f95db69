use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use selberg_det::group_model::{synthetic, EllipticClass, LoxodromicClass, OrbifoldData};
use selberg_det::kernels::HeatPair;
use selberg_det::quad::{integrate, integrate_to_infinity, QuadOptions};
use selberg_det::spectral_functions::selberg_zeta_log_derivative;
use selberg_det::trace::{
    geometric_side, resolvent_breakdown, resolvent_difference, theta_expansion_coeffs, GeometricBreakdown,
    GeometricContext, GeometricTheta, PairCombination, TestFunctionPair,
};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real(x: f64) -> Complex64 {
    c(x, 0.0)
}

/// One explicitly listed loxodromic class and nothing else.
fn single_class(a: Complex64, volume: f64) -> OrbifoldData {
    OrbifoldData {
        volume,
        dim_v: 1,
        chi_trivial: false,
        loxodromic: vec![LoxodromicClass {
            a,
            norm_primitive: a.norm_sqr(),
            m: 1,
            tr_chi: real(1.0),
            spectral: None,
        }],
        elliptic: Vec::new(),
        cusp: None,
    }
}

fn families(b: &GeometricBreakdown) -> [Complex64; 6] {
    [
        b.identity_term,
        b.elliptic_term,
        b.loxodromic_term,
        b.scattering_term,
        b.cuspidal_elliptic_term,
        b.parabolic_term,
    ]
}

#[test]
fn single_loxodromic_heat_term_matches_oracle() {
    let orb = single_class(real(2.0), 1.0);
    for &(t, oracle) in &[
        (0.5, 0.057_032_128_201_674_618_790_439_305_453_94),
        (1.0, 0.039_547_171_925_213_196_637_971_549_638_47),
    ] {
        let br = geometric_side(&HeatPair::new(t).unwrap(), &orb, 1e-12).unwrap();
        assert!((br.loxodromic_term.re - oracle).abs() < 1e-15, "t {t}: {}", br.loxodromic_term);
        assert!(!br.tail_rigorous);
    }
}

#[test]
fn empty_data_gives_zero_families() {
    let mut orb = single_class(real(2.0), 1e-300);
    orb.loxodromic.clear();
    let br = geometric_side(&HeatPair::new(1.0).unwrap(), &orb, 1e-12).unwrap();
    for v in families(&br) {
        assert!(v.norm() < 1e-290);
    }
}

#[test]
fn breakdown_total_is_sum_of_families() {
    for orb in [synthetic::flagship(), synthetic::picard_like(), synthetic::regular_cusped()] {
        for &t in &[0.1, 1.0, 10.0] {
            let br = geometric_side(&HeatPair::new(t).unwrap(), &orb, 1e-11).unwrap();
            let parts = families(&br);
            let sum: Complex64 = parts.iter().sum();
            let scale: f64 = parts.iter().map(|p| p.norm()).sum();
            assert!((br.total - sum).norm() <= 1e-12 * scale.max(1e-300));
        }
    }
}

#[test]
fn theta_is_positive_on_trivial_cocompact_data() {
    let orb = synthetic::flagship();
    let th = GeometricTheta::new(&orb, 1e-11).unwrap();
    for i in 0..30 {
        let t = 10f64.powf(-3.0 + 5.0 * i as f64 / 29.0);
        assert!(th.theta(t).unwrap() > 0.0, "t {t}");
    }
}

#[test]
fn theta_small_time_matches_expansion() {
    for orb in [synthetic::cocompact_with_elliptic(), synthetic::picard_like()] {
        let th = GeometricTheta::new(&orb, 1e-11).unwrap();
        let e = th.coeffs();
        let t = 1e-3;
        let v = th.theta(t).unwrap();
        assert!((v - e.eval(t)).abs() <= 0.02 * v.abs());
        for &t in &[1e-3, 0.05, 0.7, 3.0] {
            let direct = th.theta(t).unwrap() - e.eval(t);
            let stable = th.stable_remainder(t).unwrap();
            assert!((direct - stable).abs() <= 1e-11 * th.theta(t).unwrap().abs().max(1.0), "t {t}: {direct} vs {stable}");
        }
    }
}

#[test]
fn cocompact_coefficients_have_no_log_or_constant_term() {
    let orb = synthetic::flagship();
    let e = theta_expansion_coeffs(&orb).unwrap();
    let a = PI.sqrt() / (8.0 * PI * PI);
    assert!((e.a - a).abs() < 1e-17);
    assert_eq!(e.b, 0.0);
    assert!((e.c + a).abs() < 1e-17);
    assert_eq!(e.d, 0.0);
}

#[test]
fn elliptic_class_shifts_inverse_sqrt_coefficient() {
    let base = theta_expansion_coeffs(&synthetic::flagship()).unwrap();
    let orb = synthetic::cocompact_with_elliptic();
    let with = theta_expansion_coeffs(&orb).unwrap();
    let number = orb.elliptic_number().re;
    assert!((with.c - base.c - number / (4.0 * PI).sqrt()).abs() < 1e-15);
    assert_eq!((with.a, with.b, with.d), (base.a, base.b, base.d));
}

/// Least-squares fit of a t^{-3/2} + b log t / √t + c / √t + d on log-spaced
/// samples, with rows scaled by t^{3/2}. The next orders √t log t, √t,
/// t log t and t are fitted as well and discarded.
fn fit_coefficients(theta: impl Fn(f64) -> f64, lo: f64, hi: f64) -> [f64; 4] {
    let n = 80;
    let mut m = DMatrix::zeros(n, 8);
    let mut rhs = DVector::zeros(n);
    for i in 0..n {
        let t = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
        let w = t * t.sqrt();
        let rt = t.sqrt();
        m[(i, 0)] = 1.0;
        m[(i, 1)] = w * t.ln() / rt;
        m[(i, 2)] = w / rt;
        m[(i, 3)] = w;
        m[(i, 4)] = w * rt * t.ln();
        m[(i, 5)] = w * rt;
        m[(i, 6)] = w * t * t.ln();
        m[(i, 7)] = w * t;
        rhs[i] = w * theta(t);
    }
    let x = m.svd(true, true).solve(&rhs, 1e-14).unwrap();
    [x[0], x[1], x[2], x[3]]
}

#[test]
fn fitted_coefficients_match_analytic_on_cusped_data() {
    let orb = synthetic::picard_like();
    let th = GeometricTheta::new(&orb, 1e-12).unwrap();
    let e = th.coeffs();
    let fit = fit_coefficients(|t| th.theta(t).unwrap(), 1e-3, 1e-2);
    for (f, a) in fit.iter().zip([e.a, e.b, e.c, e.d]) {
        assert!((f - a).abs() <= 0.01 * a.abs(), "fit {fit:?} vs {e:?}");
    }
}

#[test]
fn fitted_coefficients_match_analytic_with_elliptic_class() {
    let orb = synthetic::cocompact_with_elliptic();
    let th = GeometricTheta::new(&orb, 1e-12).unwrap();
    let e = th.coeffs();
    let fit = fit_coefficients(|t| th.theta(t).unwrap(), 1e-3, 1e-2);
    assert!((fit[0] - e.a).abs() <= 0.01 * e.a);
    assert!((fit[2] - e.c).abs() <= 0.01 * e.c);
    // b and d vanish; their fitted contribution must be invisible next to θ
    let theta_min = th.theta(1e-2).unwrap();
    assert!((fit[1] * 1e-3f64.ln() / 1e-3f64.sqrt()).abs() <= 0.01 * theta_min);
    assert!(fit[3].abs() <= 0.01 * theta_min);
}

#[test]
fn resolvent_difference_matches_series() {
    let orb = synthetic::flagship();
    let (s, b) = (real(2.5), real(8.0));
    let v = resolvent_difference(s, b, &orb, 1e-12).unwrap();
    let ds = selberg_zeta_log_derivative(s, &orb, 1e-13).unwrap().value;
    let db = selberg_zeta_log_derivative(b, &orb, 1e-13).unwrap().value;
    let expected = ds / (2.0 * s) - db / (2.0 * b);
    assert!((v - expected).norm() < 1e-6 * expected.norm().max(1.0), "{v} vs {expected}");
    assert_eq!(resolvent_difference(s, s, &orb, 1e-12).unwrap(), real(0.0));
    assert!(resolvent_difference(b, s, &orb, 1e-12).is_err());
}

#[test]
fn resolvent_difference_converges_in_b() {
    let orb = synthetic::flagship();
    let s = real(2.5);
    let limit = selberg_zeta_log_derivative(s, &orb, 1e-13).unwrap().value / (2.0 * s);
    let gaps: Vec<f64> = [8.0, 16.0, 32.0]
        .iter()
        .map(|&b| (resolvent_difference(s, real(b), &orb, 1e-12).unwrap() - limit).norm())
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

/// ∫₀^∞ (e^{−(s²−1)t} − e^{−(B²−1)t}) F(t) dt for the heat-pair family F,
/// integrated with t = u² on (0, 1].
fn mellin_of_families(orb: &OrbifoldData, s: f64, b: f64) -> [Complex64; 6] {
    let ctx = GeometricContext::new(orb).unwrap();
    let weight = |t: f64| (-(s * s - 1.0) * t).exp() - (-(b * b - 1.0) * t).exp();
    let opts = QuadOptions::rel_abs(1e-9, 1e-12);
    let mut out = [real(0.0); 6];
    for (k, slot) in out.iter_mut().enumerate() {
        let family = |t: f64| families(&ctx.geometric_side(&HeatPair::new(t).unwrap(), 1e-12).unwrap())[k];
        let near = integrate(
            |u: f64| if u == 0.0 { real(0.0) } else { 2.0 * u * weight(u * u) * family(u * u) },
            0.0,
            1.0,
            &opts,
        )
        .unwrap();
        let far = integrate_to_infinity(|t: f64| weight(t) * family(t), 1.0, &opts).unwrap();
        *slot = near.value + far.value;
    }
    out
}

#[test]
fn heat_and_resolvent_families_agree_under_mellin() {
    let (s, b) = (2.0, 3.0);
    let mut single = single_class(real(2.0), 1.0);
    single.elliptic.push(EllipticClass {
        tr_chi: real(1.0),
        norm_primitive: 5.0,
        order_e: 2,
        m: 2,
        k: 1,
    });
    for orb in [single, synthetic::picard_like()] {
        let mellin = mellin_of_families(&orb, s, b);
        let res = families(&resolvent_breakdown(real(s), real(b), &orb, 1e-12).unwrap());
        for (k, (m, r)) in mellin.iter().zip(res.iter()).enumerate() {
            assert!((m - r).norm() <= 1e-6 * r.norm().max(1e-3), "family {k}: {m} vs {r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn geometric_side_is_linear(alpha in -2.0..2.0f64, beta in -2.0..2.0f64, t1 in 0.3..2.0f64, t2 in 0.3..2.0f64) {
        let orb = synthetic::picard_like();
        let ctx = GeometricContext::new(&orb).unwrap();
        let p1 = HeatPair::new(t1).unwrap();
        let p2 = HeatPair::new(t2).unwrap();
        let combo = PairCombination { parts: vec![(real(alpha), &p1 as &dyn TestFunctionPair), (real(beta), &p2)] };
        let b1 = families(&ctx.geometric_side(&p1, 1e-12).unwrap());
        let b2 = families(&ctx.geometric_side(&p2, 1e-12).unwrap());
        let bc = families(&ctx.geometric_side(&combo, 1e-12).unwrap());
        for k in 0..6 {
            let expected = alpha * b1[k] + beta * b2[k];
            let scale = (alpha * b1[k]).norm() + (beta * b2[k]).norm();
            prop_assert!((bc[k] - expected).norm() <= 1e-9 * scale.max(1e-12), "family {}: {} vs {}", k, bc[k], expected);
        }
    }
}
