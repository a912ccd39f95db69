use num_complex::Complex64;
use proptest::prelude::*;
use selberg_det::geometry::Point;
use selberg_det::kernels::heat_point_pair;
use selberg_det::lattice_siegel::{
    bernoulli2, cusp_heat_sum, eta_infinity, kronecker_l, poisson_sum, siegel_g, CuspLattice, CuspRepresentation,
    EtaSource, LatticeCharacter, PlaneLattice,
};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian(u: Complex64) -> Complex64 {
    c((-PI * u.norm_sqr()).exp(), 0.0)
}

#[test]
fn poisson_gaussian_family() {
    let lattices = [
        PlaneLattice::from_tau(c(0.0, 1.0)).unwrap(),
        PlaneLattice::from_tau(c(0.0, 0.5)).unwrap(),
        PlaneLattice::from_tau(c(0.0, 3.0)).unwrap(),
        PlaneLattice::from_tau(c(0.4, 1.3)).unwrap(),
    ];
    for lat in &lattices {
        let r = poisson_sum(gaussian, gaussian, lat, 1e-14).unwrap();
        assert!(r.residual <= 1e-12, "{lat:?}: {}", r.residual);
    }
    let square = poisson_sum(gaussian, gaussian, &lattices[0], 1e-14).unwrap();
    // (Σ_n e^{−πn²})², 40-digit evaluation
    assert!((square.lhs.re - 1.180_340_599_016_096_226_045_337_940_558_5).abs() < 1e-14);
}

#[test]
fn poisson_wide_gaussian_is_dominated_by_zero_mode() {
    let sigma: f64 = 3.0;
    let f = |u: Complex64| c((-PI * u.norm_sqr() / (sigma * sigma)).exp(), 0.0);
    let fhat = |xi: Complex64| c(sigma * sigma * (-PI * sigma * sigma * xi.norm_sqr()).exp(), 0.0);
    let lat = PlaneLattice::from_tau(c(0.0, 2.0)).unwrap();
    let r = poisson_sum(f, fhat, &lat, 1e-14).unwrap();
    assert!(r.residual < 1e-12);
    let zero_mode = sigma * sigma / 2.0;
    assert!(r.rhs.re > zero_mode && (r.rhs.re - zero_mode) < 0.02 * zero_mode);
}

#[test]
fn scaling_quarters_dual_prefactor() {
    let lat = PlaneLattice::from_tau(c(0.2, 1.1)).unwrap();
    let big = lat.scaled(2.0);
    assert!((big.area() - 4.0 * lat.area()).abs() < 1e-14);
    let r = poisson_sum(gaussian, gaussian, &big, 1e-14).unwrap();
    assert!(r.residual < 1e-12);
}

#[test]
fn cusp_sum_block_structure() {
    let lat = CuspLattice::new(c(0.0, 1.0), 2, None).unwrap();
    let rep = CuspRepresentation {
        singular_dim: 2,
        almost_singular: vec![c(-1.0, 0.0)],
        twisted: vec![LatticeCharacter { u: 0.5, v: 0.0 }],
    };
    let p = Point::new(c(0.1, 0.2), 1.5).unwrap();
    let q = Point::new(c(-0.3, 0.1), 2.0).unwrap();
    let s = cusp_heat_sum(&p, &q, 0.7, &lat, &rep, 1e-10).unwrap();
    assert_eq!(s.singular_part.len(), 4);
    for i in 0..2 {
        assert_eq!(s.nonsingular_part[i], c(0.0, 0.0));
        assert_eq!(s.singular_part[i], c(s.singular_scalar, 0.0));
    }
    for i in 2..4 {
        assert_eq!(s.singular_part[i], c(0.0, 0.0));
    }
    assert!(s.singular_scalar > 0.0);
    let bad = CuspRepresentation {
        singular_dim: 1,
        almost_singular: vec![],
        twisted: vec![LatticeCharacter { u: 1.0, v: 0.0 }],
    };
    assert!(cusp_heat_sum(&p, &q, 0.7, &lat, &bad, 1e-10).is_err());
}

#[test]
fn cusp_sum_large_time_reduces_to_identity_term() {
    let lat = CuspLattice::new(c(0.0, 1.0), 1, None).unwrap();
    let rep = CuspRepresentation {
        singular_dim: 1,
        ..Default::default()
    };
    let j = Point::on_axis(1.0).unwrap();
    let s = cusp_heat_sum(&j, &j, 50.0, &lat, &rep, 1e-10).unwrap();
    let identity = heat_point_pair(1.0, 50.0).unwrap();
    assert!((s.singular_scalar - identity).abs() < 1e-10);
}

#[test]
fn cusp_sum_tracks_leading_term_high_in_cusp() {
    let lat = CuspLattice::new(c(0.0, 1.0), 1, None).unwrap();
    let rep = CuspRepresentation {
        singular_dim: 1,
        almost_singular: vec![],
        twisted: vec![LatticeCharacter { u: 0.5, v: 0.0 }],
    };
    let mut twisted = Vec::new();
    for &r in &[5.0, 10.0, 20.0] {
        let p = Point::on_axis(r).unwrap();
        let s = cusp_heat_sum(&p, &p, 1.0, &lat, &rep, 1e-10).unwrap();
        let remainder = s.singular_scalar - s.leading_term;
        assert!(remainder.abs() <= 1e-9 * s.leading_term, "r {r}: {remainder}");
        twisted.push(s.nonsingular_part[1].norm());
    }
    let max = twisted.iter().cloned().fold(0.0, f64::max);
    assert!(max <= 2.0 * twisted[0], "{twisted:?}");
}

#[test]
fn leading_term_uses_height_ratio() {
    let lat = CuspLattice::new(c(0.0, 2.0), 2, None).unwrap();
    let p = Point::on_axis(6.0).unwrap();
    let q = Point::new(c(0.3, 0.0), 4.0).unwrap();
    let rep = CuspRepresentation {
        singular_dim: 1,
        ..Default::default()
    };
    let s = cusp_heat_sum(&p, &q, 0.8, &lat, &rep, 1e-10).unwrap();
    let lr = 1.5f64.ln();
    let expected = 24.0 * (-0.8 - lr * lr / 3.2f64).exp() / (1.0 * (4.0 * PI * 0.8f64).sqrt());
    assert!((s.leading_term - expected).abs() < 1e-13 * expected);
    assert!((s.singular_scalar - expected).abs() < 1e-8 * expected);
}

#[test]
fn siegel_examples() {
    let g = siegel_g(0.5, 0.0, c(0.0, 1.0), 1e-15).unwrap();
    assert!((g - c(-2f64.powf(0.25), 0.0)).norm() < 1e-14);
    let coarse = siegel_g(0.3, 0.7, c(0.2, 0.9), 1e-10).unwrap();
    let fine = siegel_g(0.3, 0.7, c(0.2, 0.9), 1e-14).unwrap();
    assert!((coarse - fine).norm() < 1e-9);
    assert!(siegel_g(2.0, -1.0, c(0.0, 1.0), 1e-12).is_err());
    assert!(siegel_g(0.5, 0.0, c(0.0, -1.0), 1e-12).is_err());
}

#[test]
fn kronecker_constant_examples() {
    let lat = CuspLattice::new(c(0.0, 1.0), 1, None).unwrap();
    let psi = LatticeCharacter { u: 0.5, v: 0.0 };
    let l = kronecker_l(&lat, &psi).unwrap();
    assert!((l - -1.088_793_045_151_801_065_250_344_449_118_8).abs() < 1e-14);
    assert!(kronecker_l(&lat, &LatticeCharacter { u: 0.0, v: 1.0 }).is_err());
    // Σ′ ψ(ω)/|ω|² by Ewald splitting at 30 digits
    let lat = CuspLattice::new(c(0.15, 1.2), 1, None).unwrap();
    for &(u, v, oracle) in &[
        (0.25, 0.5, -1.148_860_546_650_127_003_435_404_775_23),
        (0.1, 0.7, 0.292_689_908_774_374_559_603_708_619_44),
    ] {
        let l = kronecker_l(&lat, &LatticeCharacter { u, v }).unwrap();
        assert!((l - oracle).abs() < 1e-13, "({u}, {v}): {l}");
    }
}

#[test]
fn kronecker_constant_basis_independent() {
    let tau = c(0.15, 1.2);
    for &(u, v) in &[(0.5, 0.0), (0.25, 0.5), (0.1, 0.7), (0.0, 0.5)] {
        let a = kronecker_l(&CuspLattice::new(tau, 1, None).unwrap(), &LatticeCharacter { u, v }).unwrap();
        let b = kronecker_l(&CuspLattice::new(tau + 1.0, 1, None).unwrap(), &LatticeCharacter { u, v: v + u }).unwrap();
        assert!((a - b).abs() < 1e-12, "({u}, {v}): {a} vs {b}");
    }
}

#[test]
fn eta_infinity_examples() {
    let lat = CuspLattice::new(c(0.0, 1.0), 1, None).unwrap();
    let e = eta_infinity(&lat, Some(0.75)).unwrap();
    assert_eq!(e.value, 0.75);
    assert_eq!(e.source, EtaSource::Supplied);
    // Laurent coefficient of (|Λ|/π) Σ′|ω|^{−2s} − 1/(s − 1) at s = 1, extracted
    // by averaging over a circle of radius 0.1 with incomplete-gamma splitting
    for &(tau, oracle) in &[
        (c(0.0, 1.0), 0.822_825_249_678_847_032_995_328_716_339),
        (c(0.0, 2.0), 0.476_251_659_398_874_378_286_712_688_617),
        (c(0.3, 1.1), 0.728_197_658_635_701_647_642_641_264_831),
    ] {
        let lat = CuspLattice::new(tau, 1, None).unwrap();
        let e = eta_infinity(&lat, None).unwrap();
        assert_eq!(e.source, EtaSource::Computed);
        assert!((e.value - oracle).abs() < 1e-6, "{tau}: {}", e.value);
        assert!((e.value - oracle).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bernoulli_symmetric(x in -2.0..3.0f64) {
        prop_assert!((bernoulli2(x) - bernoulli2(1.0 - x)).abs() <= 1e-12 * (1.0 + x * x));
    }

    #[test]
    fn siegel_modulus_shift_invariant(a1 in 0.05..0.95f64, a2 in -1.0..1.0f64, x in -0.5..0.5f64, y in 0.6..2.0f64) {
        let tau = c(x, y);
        let g = siegel_g(a1, a2, tau, 1e-15).unwrap().norm();
        let shifted = siegel_g(a1 + 1.0, a2, tau, 1e-15).unwrap().norm();
        prop_assert!((g - shifted).abs() <= 1e-10 * g.max(1e-300));
    }

    #[test]
    fn kronecker_invariant_under_integer_shifts(u in 0.05..0.95f64, v in -1.0..1.0f64, x in -0.5..0.5f64, y in 0.6..2.0f64) {
        let lat = CuspLattice::new(c(x, y), 1, None).unwrap();
        let base = kronecker_l(&lat, &LatticeCharacter { u, v }).unwrap();
        let du = kronecker_l(&lat, &LatticeCharacter { u: u + 1.0, v }).unwrap();
        let dv = kronecker_l(&lat, &LatticeCharacter { u, v: v + 1.0 }).unwrap();
        prop_assert!((base - du).abs() <= 1e-10 * (1.0 + base.abs()));
        prop_assert!((base - dv).abs() <= 1e-10 * (1.0 + base.abs()));
    }
}
