//! Conjugacy-class data of a cofinite Kleinian group with a unitary
//! representation: the data model, its file format, validation, power
//! expansion of the length spectrum and desk-scale class enumeration.

mod enumerate;
mod file;
mod spectrum;
pub mod synthetic;

pub use enumerate::{enumerate_classes, CMatrix, EllipticCandidate, Enumeration, EnumerationReport};
pub use file::{load_orbifold, parse_orbifold, save_orbifold, to_canonical_string};
pub use spectrum::{ExpandedSpectrum, LoxodromicTerm};

use crate::error::{Error, Result};
use crate::lattice_siegel::{CuspLattice, LatticeCharacter};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Eigenvalue data of χ(T₀) and χ(E_T) used by the Euler-product form of Z.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Root of unity ζ(T₀) of order 2m describing the rotation part.
    pub zeta: Complex64,
    /// Eigenvalues 𝔱_j of χ(T₀).
    pub t: Vec<Complex64>,
    /// Eigenvalues 𝔱′_j of χ(E_T), paired with `t` by index.
    pub t_prime: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoxodromicClass {
    /// Eigenvalue a(T) with |a| > 1.
    pub a: Complex64,
    pub norm_primitive: f64,
    /// Order of the finite part of the centralizer.
    pub m: u32,
    pub tr_chi: Complex64,
    pub spectral: Option<SpectralData>,
}

impl LoxodromicClass {
    pub fn norm(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// The power p with N(T) = N(T₀)^p.
    pub fn power(&self) -> u32 {
        (self.norm().ln() / self.norm_primitive.ln()).round().max(1.0) as u32
    }

    /// tr χ(T) log N(T₀) / (m |a − a⁻¹|²).
    pub fn weight(&self) -> Complex64 {
        self.tr_chi * self.norm_primitive.ln() / (self.m as f64 * (self.a - self.a.inv()).norm_sqr())
    }
}

/// A non-cuspidal elliptic class R = R₀^k.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticClass {
    pub tr_chi: Complex64,
    pub norm_primitive: f64,
    pub order_e: u32,
    pub m: u32,
    pub k: u32,
}

impl EllipticClass {
    /// tr χ(R) log N(T₀) / (4 |ℰ(R)| sin²(πk/m)).
    pub fn weight(&self) -> Complex64 {
        let s = (PI * self.k as f64 / self.m as f64).sin();
        self.tr_chi * self.norm_primitive.ln() / (4.0 * self.order_e as f64 * s * s)
    }
}

/// A representative g_i of a non-parabolic, non-identity class of the cusp
/// stabilizer.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspidalElliptic {
    pub epsilon: Complex64,
    pub c_abs: f64,
    pub order_centralizer: u32,
    pub tr_chi: Complex64,
}

impl CuspidalElliptic {
    /// q = |1 − ε²|².
    pub fn q(&self) -> f64 {
        (1.0 - self.epsilon * self.epsilon).norm_sqr()
    }

    /// tr χ(g) / (|𝒞(g)| |1 − ε²|²).
    pub fn coefficient(&self) -> Complex64 {
        self.tr_chi / (self.order_centralizer as f64 * self.q())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuspData {
    pub lattice: CuspLattice,
    /// Whether ε was given explicitly in the source file.
    pub epsilon_explicit: bool,
    pub k_inf: u32,
    pub l_inf: u32,
    pub characters: Vec<LatticeCharacter>,
    pub cuspidal_elliptic: Vec<CuspidalElliptic>,
    pub eta_inf: Option<f64>,
    pub tr_s0: f64,
    pub y: f64,
}

impl CuspData {
    /// l∞ / [Γ∞ : Γ′∞].
    pub fn l_ratio(&self) -> f64 {
        self.l_inf as f64 / self.lattice.index as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbifoldData {
    pub volume: f64,
    pub dim_v: u32,
    pub chi_trivial: bool,
    pub loxodromic: Vec<LoxodromicClass>,
    pub elliptic: Vec<EllipticClass>,
    pub cusp: Option<CuspData>,
}

impl OrbifoldData {
    /// dim ker Δ: dim V for the trivial character, else 0.
    pub fn q_chi(&self) -> u32 {
        if self.chi_trivial {
            self.dim_v
        } else {
            0
        }
    }

    pub fn is_cocompact(&self) -> bool {
        self.cusp.is_none()
    }

    /// Σ over non-cuspidal elliptic classes of tr χ log N(T₀) / (4|ℰ| sin²(πk/m)).
    pub fn elliptic_number(&self) -> Complex64 {
        self.elliptic.iter().map(|e| e.weight()).sum()
    }

    /// k(Γ, χ) = dim V∞, zero without a cusp.
    pub fn k_inf(&self) -> u32 {
        self.cusp.as_ref().map_or(0, |c| c.k_inf)
    }

    pub fn sort_loxodromic(&mut self) {
        self.loxodromic.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub errors: Vec<ValidationIssue>,
    pub warnings: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    fn error(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ValidationIssue {
            field: field.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(ValidationIssue {
            field: field.into(),
            message: message.into(),
        });
    }

    /// The first error as a crate error, if any.
    pub fn into_result(self) -> Result<Vec<ValidationIssue>> {
        match self.errors.into_iter().next() {
            Some(e) => Err(Error::Validation {
                field: e.field,
                message: e.message,
            }),
            None => Ok(self.warnings),
        }
    }
}

/// What downstream evaluations the data will be used for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    pub zeta_requested: bool,
    /// Smallest Re(s) the caller intends to evaluate Z at.
    pub s_min: f64,
    /// The largest supplied norm should exceed this.
    pub norm_floor: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            zeta_requested: false,
            s_min: 2.0,
            norm_floor: 20.0,
        }
    }
}

fn unit(z: Complex64) -> bool {
    (z.norm() - 1.0).abs() < 1e-9
}

/// Checks every invariant of the data model.
pub fn validate(orb: &OrbifoldData, cfg: &ValidationConfig) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let dim = orb.dim_v as f64;
    if !(orb.volume > 0.0 && orb.volume.is_finite()) {
        rep.error("meta.volume", format!("must be positive, got {}", orb.volume));
    }
    if orb.dim_v == 0 {
        rep.error("meta.dim_v", "must be at least 1");
    }
    let mut previous = 0.0;
    for (i, c) in orb.loxodromic.iter().enumerate() {
        let field = format!("loxodromic[{i}]");
        if !(c.a.norm() > 1.0 + 1e-12) {
            rep.error(format!("{field}.a"), format!("|a| = {} must exceed 1", c.a.norm()));
            continue;
        }
        if !(c.norm_primitive > 1.0) {
            rep.error(format!("{field}.norm_primitive"), "must exceed 1");
            continue;
        }
        let n = c.norm();
        let p = c.power();
        let expected = c.norm_primitive.powi(p as i32);
        if (n - expected).abs() > 1e-9 * n {
            rep.error(
                format!("{field}.norm_primitive"),
                format!("N(T) = {n} is not an integral power of N(T0) = {}", c.norm_primitive),
            );
        }
        if c.m == 0 {
            rep.error(format!("{field}.m"), "must be positive");
        }
        if c.tr_chi.norm() > dim + 1e-9 {
            rep.error(format!("{field}.tr_chi"), "|tr chi| exceeds dim V");
        }
        if n < previous {
            rep.error(format!("{field}"), "loxodromic classes must be sorted by norm");
        }
        previous = n;
        if let Some(sd) = &c.spectral {
            if p != 1 {
                rep.error(format!("{field}.spectral"), "spectral data belongs on primitive classes only");
            }
            if sd.t.len() != orb.dim_v as usize || sd.t_prime.len() != orb.dim_v as usize {
                rep.error(format!("{field}.spectral"), "eigenvalue lists must have dim V entries");
            }
            if !sd.t.iter().chain(sd.t_prime.iter()).all(|z| unit(*z)) {
                rep.error(format!("{field}.spectral"), "eigenvalues of a unitary map must lie on the unit circle");
            }
            let root = sd.zeta.powu(2 * c.m.max(1));
            if !unit(sd.zeta) || (root - 1.0).norm() > 1e-9 {
                rep.error(format!("{field}.spectral.zeta"), "zeta must be a root of unity of order dividing 2m");
            }
            let tr: Complex64 = sd.t.iter().sum();
            if (tr - c.tr_chi).norm() > 1e-9 * dim.max(1.0) {
                rep.error(format!("{field}.spectral"), "sum of eigenvalues differs from tr_chi");
            }
        }
    }
    for (i, e) in orb.elliptic.iter().enumerate() {
        let field = format!("elliptic[{i}]");
        if e.m < 2 || e.k == 0 || e.k >= e.m {
            rep.error(format!("{field}.k"), "need 1 <= k < m");
        }
        if e.order_e == 0 {
            rep.error(format!("{field}.order_e"), "must be positive");
        }
        if !(e.norm_primitive > 1.0) {
            rep.error(format!("{field}.norm_primitive"), "must exceed 1");
        }
        if e.tr_chi.norm() > dim + 1e-9 {
            rep.error(format!("{field}.tr_chi"), "|tr chi| exceeds dim V");
        }
    }
    if orb.elliptic_number().im.abs() > 1e-10 {
        rep.warn("elliptic", "elliptic traces are not closed under conjugation; imaginary part ignored");
    }
    if let Some(cusp) = &orb.cusp {
        if cusp.k_inf > cusp.l_inf {
            rep.error("cusp.k_inf", format!("k_inf = {} exceeds l_inf = {}", cusp.k_inf, cusp.l_inf));
        }
        if cusp.l_inf > orb.dim_v {
            rep.error("cusp.l_inf", "l_inf exceeds dim V");
        }
        if !(cusp.y > 0.0) {
            rep.error("cusp.Y", "must be positive");
        }
        if cusp.tr_s0.abs() > cusp.k_inf as f64 + 1e-9 {
            rep.warn("cusp.tr_S0", "|tr S(0)| exceeds k_inf although S(0) is unitary");
        }
        for (i, ch) in cusp.characters.iter().enumerate() {
            if ch.is_trivial() {
                rep.error(format!("cusp.character[{i}]"), "(u, v) must not both be integers");
            }
        }
        let order = 2 * cusp.lattice.index;
        for (i, g) in cusp.cuspidal_elliptic.iter().enumerate() {
            let field = format!("cusp.cusp_elliptic[{i}]");
            if (g.epsilon.powu(order) - 1.0).norm() > 1e-9 || !unit(g.epsilon) {
                rep.error(format!("{field}.epsilon"), format!("epsilon^{order} must equal 1"));
            }
            if g.q() < 1e-18 {
                rep.error(format!("{field}.epsilon"), "epsilon must not be ±1");
            }
            if !(g.c_abs > 0.0) {
                rep.error(format!("{field}.c_abs"), "must be positive");
            }
            if g.order_centralizer == 0 {
                rep.error(format!("{field}.order_centralizer"), "must be positive");
            }
            if g.tr_chi.norm() > dim + 1e-9 {
                rep.error(format!("{field}.tr_chi"), "|tr chi| exceeds dim V");
            }
        }
    }
    if cfg.zeta_requested {
        match orb.loxodromic.last() {
            None => rep.warn("loxodromic", "empty class list: Z(s) is identically 1"),
            Some(last) => {
                let generated = orb.loxodromic.iter().all(|c| c.spectral.is_some());
                if !generated && last.norm() < cfg.norm_floor {
                    rep.warn(
                        "loxodromic",
                        format!(
                            "largest norm {} is below the floor {}; the Dirichlet series tail at Re(s) = {} is not controlled",
                            last.norm(),
                            cfg.norm_floor,
                            cfg.s_min
                        ),
                    );
                }
            }
        }
    }
    rep
}
