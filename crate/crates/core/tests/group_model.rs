use num_complex::Complex64;
use proptest::prelude::*;
use selberg_det::geometry::GroupElement;
use selberg_det::group_model::{
    enumerate_classes, parse_orbifold, synthetic, to_canonical_string, validate, CMatrix, ExpandedSpectrum,
    ValidationConfig,
};
use std::collections::BTreeSet;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

type Gauss = (i64, i64);

fn gmul(x: Gauss, y: Gauss) -> Gauss {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

fn gadd(x: Gauss, y: Gauss) -> Gauss {
    (x.0 + y.0, x.1 + y.1)
}

type GMat = [Gauss; 4];

fn mmul(x: &GMat, y: &GMat) -> GMat {
    [
        gadd(gmul(x[0], y[0]), gmul(x[1], y[2])),
        gadd(gmul(x[0], y[1]), gmul(x[1], y[3])),
        gadd(gmul(x[2], y[0]), gmul(x[3], y[2])),
        gadd(gmul(x[2], y[1]), gmul(x[3], y[3])),
    ]
}

fn picard_exact() -> Vec<GMat> {
    let s = [(0, 0), (-1, 0), (1, 0), (0, 0)];
    let s_inv = [(0, 0), (1, 0), (-1, 0), (0, 0)];
    let t = [(1, 0), (1, 0), (0, 0), (1, 0)];
    let t_inv = [(1, 0), (-1, 0), (0, 0), (1, 0)];
    let u = [(1, 0), (0, 1), (0, 0), (1, 0)];
    let u_inv = [(1, 0), (0, -1), (0, 0), (1, 0)];
    vec![s, s_inv, t, t_inv, u, u_inv]
}

fn picard_generators() -> Vec<GroupElement> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    vec![
        GroupElement::new(zero, -one, one, zero).unwrap(),
        GroupElement::new(one, one, zero, one).unwrap(),
        GroupElement::new(one, c(0.0, 1.0), zero, one).unwrap(),
    ]
}

/// Distinct squared traces of loxodromic reduced words, computed exactly.
fn exact_loxodromic_keys(max_len: usize) -> BTreeSet<Gauss> {
    let letters = picard_exact();
    let mut keys = BTreeSet::new();
    let mut frontier: Vec<(usize, GMat)> = (0..letters.len()).map(|l| (l, letters[l])).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (last, m) in &frontier {
            let tr = gadd(m[0], m[3]);
            let elliptic_or_parabolic = tr.1 == 0 && tr.0.abs() <= 2;
            if !elliptic_or_parabolic {
                keys.insert(gmul(tr, tr));
            }
            for (l, g) in letters.iter().enumerate() {
                if l != (last ^ 1) {
                    next.push((l, mmul(m, g)));
                }
            }
        }
        frontier = next;
    }
    keys
}

fn norm_from_trace(tr: Complex64) -> f64 {
    synthetic::eigenvalue_from_trace(tr).norm_sqr()
}

#[test]
fn picard_enumeration_matches_exact_arithmetic() {
    let chi = vec![CMatrix::scalar(c(1.0, 0.0)); 3];
    let e = enumerate_classes(&picard_generators(), &chi, 6, f64::INFINITY).unwrap();
    let exact = exact_loxodromic_keys(6);
    assert_eq!(e.report.buckets, exact.len());
    let exact_min = exact
        .iter()
        .map(|k| norm_from_trace(Complex64::new(k.0 as f64, k.1 as f64).sqrt()))
        .fold(f64::INFINITY, f64::min);
    let found_min = e.loxodromic.iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
    assert!((found_min - exact_min).abs() < 1e-12 * exact_min);
    assert_eq!(e.report.words, 23436);
    assert_eq!(e.report.buckets, 33);
    assert!((found_min - 2.618_033_988_749_895).abs() < 1e-12);
}

#[test]
fn picard_enumeration_is_independent_of_generator_order() {
    let chi = vec![CMatrix::scalar(c(1.0, 0.0)); 3];
    let gens = picard_generators();
    let reordered = vec![gens[2], gens[0], gens[1]];
    let a = enumerate_classes(&gens, &chi, 5, 1e6).unwrap();
    let b = enumerate_classes(&reordered, &chi, 5, 1e6).unwrap();
    let key = |e: &selberg_det::group_model::Enumeration| -> BTreeSet<(i64, i64, i64)> {
        e.loxodromic
            .iter()
            .map(|l| {
                let a2 = l.a * l.a;
                ((a2.re * 1e6).round() as i64, (a2.im * 1e6).round() as i64, l.power() as i64)
            })
            .collect()
    };
    assert_eq!(key(&a), key(&b));
    assert_eq!(a.report.words, b.report.words);
    assert_eq!(a.report.buckets, b.report.buckets);
}

#[test]
fn picard_elliptic_candidates_have_orders_two_and_three() {
    let chi = vec![CMatrix::scalar(c(1.0, 0.0)); 3];
    let e = enumerate_classes(&picard_generators(), &chi, 4, 1e6).unwrap();
    let orders: BTreeSet<u32> = e.elliptic.iter().filter_map(|x| x.order).collect();
    assert!(orders.contains(&2));
    assert!(orders.contains(&3));
}

#[test]
fn synthetic_data_sets_validate() {
    let cfg = ValidationConfig::default();
    for orb in [
        synthetic::flagship(),
        synthetic::cocompact_with_elliptic(),
        synthetic::rich_spectral(),
        synthetic::picard_like(),
        synthetic::regular_cusped(),
    ] {
        let rep = validate(&orb, &cfg);
        assert!(rep.errors.is_empty(), "{:?}", rep.errors);
    }
}

#[test]
fn canonical_files_round_trip_byte_identical() {
    for orb in [synthetic::picard_like(), synthetic::rich_spectral(), synthetic::cocompact(3, 4.0, 9.0)] {
        let text = to_canonical_string(&orb);
        let parsed = parse_orbifold(&text).unwrap();
        assert_eq!(to_canonical_string(&parsed), text);
    }
}

#[test]
fn minimal_cocompact_file_loads() {
    let text = "[meta]\nvolume = 1.5\ndim_v = 1\nchi_trivial = true\n\n[loxodromic]\n\
                class = 2.0, 0.0, 4.0, 1, 1.0, 0.0\nclass = 0.0, 3.0, 9.0, 1, 1.0, 0.0\n\
                class = 2.5, 0.0, 6.25, 1, 1.0, 0.0\n";
    let orb = parse_orbifold(text).unwrap();
    assert!(orb.cusp.is_none());
    assert_eq!(orb.q_chi(), 1);
    assert_eq!(orb.loxodromic.len(), 3);
    assert!(orb.loxodromic.windows(2).all(|w| w[0].norm() <= w[1].norm()));
}

#[test]
fn unit_eigenvalue_is_a_validation_error() {
    let text = "[meta]\nvolume = 1.0\ndim_v = 1\nchi_trivial = true\n[loxodromic]\nclass = 1.0, 0.0, 4.0, 1, 1.0, 0.0\n";
    let err = parse_orbifold(text).unwrap_err();
    assert!(matches!(err, selberg_det::Error::Validation { .. }), "{err:?}");
}

#[test]
fn schema_violation_reports_line() {
    let text = "[meta]\nvolume = 1.0\nbogus = 3\n";
    match parse_orbifold(text).unwrap_err() {
        selberg_det::Error::Parse { line, .. } => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn picard_file_loads_with_cusp() {
    let text = to_canonical_string(&synthetic::picard_like());
    let orb = parse_orbifold(&text).unwrap();
    let cusp = orb.cusp.as_ref().unwrap();
    assert_eq!(cusp.lattice.index, 2);
    assert_eq!(cusp.tr_s0, -1.0);
    assert!((cusp.lattice.tau - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn expanded_powers_reproduce_norms() {
    let spec = ExpandedSpectrum::new(&synthetic::rich_spectral());
    for t in &spec.terms {
        assert!((t.norm - t.a.norm_sqr()).abs() <= 1e-12 * t.norm);
        assert!((t.log_norm - t.power as f64 * t.log_norm_primitive).abs() < 1e-12 * t.log_norm);
    }
    assert!(spec.terms.windows(2).all(|w| w[0].log_norm <= w[1].log_norm));
    let bound = spec.tail_bound(|_| 1.0);
    assert!(bound > 0.0 && bound < 1e-28);
}

proptest! {
    #[test]
    fn cyclic_powers_detected(re in 1.2f64..3.0, im in -1.0f64..1.0, len in 2usize..6) {
        let a = c(re, im);
        let g = GroupElement::new(a, c(0.0, 0.0), c(0.0, 0.0), a.inv()).unwrap();
        let e = enumerate_classes(&[g], &[CMatrix::scalar(c(1.0, 0.0))], len, f64::INFINITY).unwrap();
        prop_assert_eq!(e.loxodromic.len(), len);
        let n0 = a.norm_sqr();
        for (k, cl) in e.loxodromic.iter().enumerate() {
            prop_assert!((cl.norm_primitive - n0).abs() < 1e-12 * n0);
            prop_assert_eq!(cl.power(), k as u32 + 1);
        }
    }
}
