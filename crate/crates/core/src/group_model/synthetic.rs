//! Deterministic synthetic class data used by tests, examples and the
//! acceptance suite.

use super::{CuspData, CuspidalElliptic, EllipticClass, LoxodromicClass, OrbifoldData, SpectralData};
use crate::lattice_siegel::{CuspLattice, LatticeCharacter};
use num_complex::Complex64;
use std::f64::consts::PI;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653_3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn trivial_spectral() -> Option<SpectralData> {
    Some(SpectralData {
        zeta: c(-1.0, 0.0),
        t: vec![c(1.0, 0.0)],
        t_prime: vec![c(1.0, 0.0)],
    })
}

/// Eigenvalue of modulus > 1 of a matrix with the given trace.
pub fn eigenvalue_from_trace(tr: Complex64) -> Complex64 {
    let disc = (tr * tr - 4.0).sqrt();
    let a = 0.5 * (tr + disc);
    if a.norm() >= 1.0 {
        a
    } else {
        0.5 * (tr - disc)
    }
}

/// Torsion-free cocompact data: volume 1, dim V = 1, trivial character,
/// `n` primitive classes with norms evenly spaced in [n_min, n_max] and
/// rotation angles spread by the golden angle.
pub fn cocompact(n: usize, n_min: f64, n_max: f64) -> OrbifoldData {
    let loxodromic = (0..n)
        .map(|i| {
            let frac = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            let norm = n_min + (n_max - n_min) * frac;
            let angle = ((i + 1) as f64 * GOLDEN_ANGLE) % (2.0 * PI);
            LoxodromicClass {
                a: Complex64::from_polar(norm.sqrt(), angle),
                norm_primitive: norm,
                m: 1,
                tr_chi: c(1.0, 0.0),
                spectral: trivial_spectral(),
            }
        })
        .collect();
    let mut orb = OrbifoldData {
        volume: 1.0,
        dim_v: 1,
        chi_trivial: true,
        loxodromic,
        elliptic: Vec::new(),
        cusp: None,
    };
    orb.sort_loxodromic();
    orb
}

/// The 50-class flagship data set with N(T₀) ∈ [4, 25].
pub fn flagship() -> OrbifoldData {
    cocompact(50, 4.0, 25.0)
}

/// Flagship data plus one non-cuspidal elliptic class of order 2.
pub fn cocompact_with_elliptic() -> OrbifoldData {
    let mut orb = flagship();
    orb.elliptic.push(EllipticClass {
        tr_chi: c(1.0, 0.0),
        norm_primitive: 5.0,
        order_e: 2,
        m: 2,
        k: 1,
    });
    orb
}

/// dim V = 2 with a nontrivial character and centralizers of orders 1, 2, 3,
/// so that the Euler product exercises the selection rule.
pub fn rich_spectral() -> OrbifoldData {
    let loxodromic = vec![
        LoxodromicClass {
            a: Complex64::from_polar(2.0, 0.3),
            norm_primitive: 4.0,
            m: 1,
            tr_chi: c(2.0 * 0.4f64.cos(), 0.0),
            spectral: Some(SpectralData {
                zeta: c(-1.0, 0.0),
                t: vec![Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, -0.4)],
                t_prime: vec![c(1.0, 0.0), c(1.0, 0.0)],
            }),
        },
        LoxodromicClass {
            a: Complex64::from_polar(2.5, 0.1),
            norm_primitive: 6.25,
            m: 2,
            tr_chi: c(2.0 * 0.7f64.cos(), 0.0),
            spectral: Some(SpectralData {
                zeta: c(0.0, 1.0),
                t: vec![Complex64::from_polar(1.0, 0.7), Complex64::from_polar(1.0, -0.7)],
                t_prime: vec![c(1.0, 0.0), c(-1.0, 0.0)],
            }),
        },
        LoxodromicClass {
            a: Complex64::from_polar(3.2, 1.0),
            norm_primitive: 10.24,
            m: 3,
            tr_chi: c(2.0, 0.0),
            spectral: Some(SpectralData {
                zeta: Complex64::from_polar(1.0, PI / 3.0),
                t: vec![c(1.0, 0.0), c(1.0, 0.0)],
                t_prime: vec![Complex64::from_polar(1.0, 2.0 * PI / 3.0), Complex64::from_polar(1.0, -2.0 * PI / 3.0)],
            }),
        },
    ];
    OrbifoldData {
        volume: 2.5,
        dim_v: 2,
        chi_trivial: false,
        loxodromic,
        elliptic: Vec::new(),
        cusp: None,
    }
}

/// A Picard-type cusped orbifold: τ = i, rotation index 2, singular
/// trivial character, two elliptic classes and one cuspidal elliptic class.
pub fn picard_like() -> OrbifoldData {
    let traces = [c(3.0, 0.0), c(2.0, 2.0), c(3.0, 1.0), c(4.0, 0.0), c(1.0, 3.0), c(4.0, 2.0)];
    let loxodromic = traces
        .iter()
        .map(|&tr| {
            let a = eigenvalue_from_trace(tr);
            LoxodromicClass {
                a,
                norm_primitive: a.norm_sqr(),
                m: 1,
                tr_chi: c(1.0, 0.0),
                spectral: trivial_spectral(),
            }
        })
        .collect();
    let mut orb = OrbifoldData {
        volume: 0.305_321_864_725_739_9,
        dim_v: 1,
        chi_trivial: true,
        loxodromic,
        elliptic: vec![
            EllipticClass {
                tr_chi: c(1.0, 0.0),
                norm_primitive: 6.854_101_966_249_685,
                order_e: 2,
                m: 2,
                k: 1,
            },
            EllipticClass {
                tr_chi: c(1.0, 0.0),
                norm_primitive: 13.928_203_230_275_509,
                order_e: 3,
                m: 3,
                k: 1,
            },
        ],
        cusp: Some(CuspData {
            lattice: CuspLattice::new(c(0.0, 1.0), 2, None).expect("valid lattice"),
            epsilon_explicit: false,
            k_inf: 1,
            l_inf: 1,
            characters: Vec::new(),
            cuspidal_elliptic: vec![CuspidalElliptic {
                epsilon: c(0.0, 1.0),
                c_abs: 2.0,
                order_centralizer: 4,
                tr_chi: c(1.0, 0.0),
            }],
            eta_inf: None,
            tr_s0: -1.0,
            y: 1.0,
        }),
    };
    orb.sort_loxodromic();
    orb
}

/// Torsion-free, one cusp, regular character (no invariant vectors at the
/// cusp): the lattice character enters only through L(Λ, ψ).
pub fn regular_cusped() -> OrbifoldData {
    let mut orb = cocompact(12, 5.0, 30.0);
    orb.volume = 2.029_883_212_819_307;
    orb.chi_trivial = false;
    for (i, class) in orb.loxodromic.iter_mut().enumerate() {
        let sign = if i % 3 == 0 { -1.0 } else { 1.0 };
        class.tr_chi = c(sign, 0.0);
        class.spectral = Some(SpectralData {
            zeta: c(-1.0, 0.0),
            t: vec![c(sign, 0.0)],
            t_prime: vec![c(1.0, 0.0)],
        });
    }
    orb.cusp = Some(CuspData {
        lattice: CuspLattice::new(c(0.5, 0.5 * 3f64.sqrt()), 1, None).expect("valid lattice"),
        epsilon_explicit: false,
        k_inf: 0,
        l_inf: 0,
        characters: vec![LatticeCharacter { u: 0.5, v: 0.0 }],
        cuspidal_elliptic: Vec::new(),
        eta_inf: None,
        tr_s0: 0.0,
        y: 1.0,
    });
    orb
}
