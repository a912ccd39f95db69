//! Selberg zeta function (Dirichlet series and Euler product), Ω(s), the
//! determinant constants, and log det(Δ − (1 − s²)) by the closed form and
//! by the regularized Mellin transform of θ.

use crate::error::{Error, Result};
use crate::group_model::{ExpandedSpectrum, OrbifoldData};
use crate::kernels::{regularized_mellin_derivative, HeatTrace, SmallTimeCoeffs};
use crate::lattice_siegel::EtaSource;
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::{gamma, ln_gamma, EULER_GAMMA, HALF_LN_TWO_PI};
use crate::summation::ComplexNeumaier;
use crate::trace::{cusp_elliptic_kernel, GeometricContext, GeometricTheta};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

/// γ + log 4 − 2.
pub const D1_COCOMPACT: f64 = -0.036_489_973_978_576_520_559;

const SELECTION_TOL: f64 = 1e-9;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A truncated series together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// False when explicit class lists were summed without a provable tail.
    pub tail_rigorous: bool,
}

fn check_half_plane(s: Complex64) -> Result<()> {
    if !(s.re > 1.0) {
        return Err(Error::domain(format!("Re s must exceed 1, got {s}")));
    }
    Ok(())
}

fn dirichlet_series<F>(s: Complex64, orbifold: &OrbifoldData, tol: f64, term: F, majorant: impl Fn(f64) -> f64) -> Result<SeriesValue>
where
    F: Fn(Complex64, f64) -> Complex64,
{
    check_half_plane(s)?;
    let spectrum = ExpandedSpectrum::new(orbifold);
    let mut acc = ComplexNeumaier::new();
    for t in &spectrum.terms {
        acc.add(term(t.weight * (-s * t.log_norm).exp(), t.log_norm));
    }
    let tail = spectrum.tail_bound(majorant);
    if tail > tol {
        return Err(Error::accuracy("class-list tail", tail, tol));
    }
    Ok(SeriesValue {
        value: acc.value(),
        tail_bound: tail,
        tail_rigorous: orbifold.loxodromic.iter().all(|c| c.spectral.is_some()),
    })
}

/// log Z(s) = −Σ_T w(T) N(T)^{−s} / log N(T).
pub fn selberg_zeta_log(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<SeriesValue> {
    let sigma = s.re;
    dirichlet_series(s, orbifold, tol, |x, l| -x / l, |l| (-sigma * l).exp() / l)
}

/// Z′/Z(s) = Σ_T w(T) N(T)^{−s}.
pub fn selberg_zeta_log_derivative(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<SeriesValue> {
    let sigma = s.re;
    dirichlet_series(s, orbifold, tol, |x, _| x, |l| (-sigma * l).exp())
}

/// The Euler product over primitive classes, eigenvalues of χ(T₀) and pairs
/// (k, l) passing the selection rule 𝔱′_j ζ^{2l} ζ^{−2k} = 1.
pub fn selberg_zeta_product(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<Complex64> {
    check_half_plane(s)?;
    let eps = tol.min(1e-12) * 1e-6;
    let mut product = one();
    for (i, class) in orbifold.loxodromic.iter().enumerate() {
        let sd = class
            .spectral
            .as_ref()
            .ok_or_else(|| Error::Data(format!("loxodromic[{i}] has no spectral data")))?;
        let n0 = class.norm_primitive;
        let ln0 = n0.ln();
        let base = (-(s + 1.0) * ln0).exp();
        let max_order = (((1.0 / eps).ln() / ln0) - s.re - 1.0).ceil().max(0.0) as u32;
        let ainv2 = (class.a * class.a).inv();
        let abar_inv2 = ainv2.conj();
        let zeta2 = sd.zeta * sd.zeta;
        for (t, tp) in sd.t.iter().zip(sd.t_prime.iter()) {
            for total in 0..=max_order {
                for k in 0..=total {
                    let l = total - k;
                    let c = tp * zeta2.powu(l) * zeta2.inv().powu(k);
                    if (c - 1.0).norm() > SELECTION_TOL {
                        continue;
                    }
                    product *= 1.0 - t * ainv2.powu(k) * abar_inv2.powu(l) * base;
                }
            }
        }
    }
    Ok(product)
}

/// −Σ coefficient · ∫₀^∞ e^{−sx} sinh x / (x (cosh x − 1 + q/2)) dx.
pub fn omega(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::domain(format!("Ω needs Re s > 0, got {s}")));
    }
    let Some(cusp) = &orbifold.cusp else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let opts = QuadOptions::rel_abs(tol * 1e-2, tol * 1e-4);
    let mut acc = ComplexNeumaier::new();
    for (i, ce) in cusp.cuspidal_elliptic.iter().enumerate() {
        let q = ce.q();
        if q < 1e-12 {
            return Err(Error::domain(format!("cusp_elliptic[{i}]: ε² = 1 degenerates the kernel")));
        }
        let r = integrate_to_infinity(
            |x: f64| {
                let k_over_x = if x < 1e-8 { 2.0 / q } else { cusp_elliptic_kernel(x, q) / x };
                (-s * x).exp() * k_over_x
            },
            0.0,
            &opts,
        )?;
        acc.add(-ce.coefficient() * r.value);
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub d1: f64,
    /// k(Γ, χ) log Y, the other s-linear coefficient.
    pub k_log_y: f64,
    /// l∞ / [Γ∞ : Γ′∞].
    pub l_ratio: f64,
    pub k_inf: f64,
    pub eta_source: Option<EtaSource>,
}

pub fn determinant_constants(orbifold: &OrbifoldData) -> Result<DetConstants> {
    let ctx = GeometricContext::new(orbifold)?;
    let c1 = ctx.g0_coefficient();
    if c1.im.abs() > 1e-10 * c1.norm().max(1.0) {
        return Err(Error::domain("C1 is not real for this data"));
    }
    let l_ratio = ctx.l_ratio();
    let tr_s0 = orbifold.cusp.as_ref().map_or(0.0, |c| c.tr_s0);
    let k = orbifold.k_inf() as f64;
    Ok(DetConstants {
        c1: c1.re,
        c2: tr_s0 - l_ratio,
        c3: orbifold.volume * orbifold.dim_v as f64 / (4.0 * PI),
        d1: EULER_GAMMA + 2.0 * LN_2 - 2.0 + l_ratio * HALF_LN_TWO_PI,
        k_log_y: k * orbifold.cusp.as_ref().map_or(0.0, |c| c.y.ln()),
        l_ratio,
        k_inf: k,
        eta_source: ctx.eta.map(|e| e.source),
    })
}

/// The closed-form assemblies of log det(Δ − (1 − s²)).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedDet {
    pub log_z: SeriesValue,
    pub omega: Complex64,
    pub constants: DetConstants,
    /// Constant, logΓ, log s and cubic terms exactly as in the theorem.
    pub theorem_form: Complex64,
    /// The theorem form without the −D₁ constant.
    pub corollary_form: Complex64,
    /// The assembly obtained by Mellin-transforming each family of θ:
    /// log Z + s(k log Y + C₁) − l logΓ(s+1) + ((k + l)/2) log s + Ω
    /// − (2/3)C₃s³ + l log√(2π), with l = l∞/[Γ∞ : Γ′∞].
    pub family_form: Complex64,
    pub warnings: Vec<String>,
}

pub fn log_det_closed(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<ClosedDet> {
    let mut warnings = Vec::new();
    if s.re <= 2.0 {
        warnings.push(format!("Re s = {} is outside the half plane Re s > 2", s.re));
    }
    let log_z = selberg_zeta_log(s, orbifold, tol)?;
    let om = omega(s, orbifold, tol)?;
    let k = determinant_constants(orbifold)?;
    let lg = ln_gamma(s + 1.0);
    let ls = s.ln();
    let cubic = -(2.0 / 3.0) * k.c3 * s * s * s;
    let linear = s * (k.k_log_y + k.c1);
    let theorem_form = log_z.value + linear + k.l_ratio * lg + om - 0.5 * k.c2 * ls + cubic - k.d1;
    let corollary_form = theorem_form + k.d1;
    let family_form = log_z.value + linear - k.l_ratio * lg + 0.5 * (k.k_inf + k.l_ratio) * ls + om + cubic
        + k.l_ratio * HALF_LN_TWO_PI;
    Ok(ClosedDet {
        log_z,
        omega: om,
        constants: k,
        theorem_form,
        corollary_form,
        family_form,
        warnings,
    })
}

/// log det = log Z(s) − s³ vol/(6π) + s C₁ for torsion-free data with one
/// cusp and a regular character, or cocompact data with a regular character.
pub fn log_det_regular_fast(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<Complex64> {
    if orbifold.dim_v != 1 {
        return Err(Error::domain("fast path needs a one-dimensional character"));
    }
    if let Some(c) = &orbifold.cusp {
        if !orbifold.elliptic.is_empty() || !c.cuspidal_elliptic.is_empty() || c.k_inf != 0 || c.l_inf != 0 {
            return Err(Error::domain("fast path needs torsion-free data and a regular character"));
        }
    }
    let k = determinant_constants(orbifold)?;
    let log_z = selberg_zeta_log(s, orbifold, tol)?;
    Ok(log_z.value - s * s * s * orbifold.volume / (6.0 * PI) + s * k.c1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDet {
    pub value: Complex64,
    pub quadrature_error: f64,
}

/// −∂H/∂w(0, s) for any heat trace with its own small-time expansion.
pub fn log_det_from_trace<T: HeatTrace + ?Sized>(
    theta: &T,
    coeffs: &SmallTimeCoeffs,
    s: Complex64,
    tol: f64,
) -> Result<NumericDet> {
    let m = regularized_mellin_derivative(theta, coeffs, s, tol)?;
    Ok(NumericDet {
        value: -m.value,
        quadrature_error: m.error,
    })
}

/// log det(Δ − (1 − s²)) from the regularized Mellin transform of θ.
pub fn log_det_numeric(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<NumericDet> {
    let theta = GeometricTheta::new(orbifold, tol * 1e-3)?;
    let coeffs = theta.coeffs();
    let result = log_det_from_trace(&theta, &coeffs, s, tol);
    if let Some(e) = theta.take_error() {
        return Err(e);
    }
    let r = result?;
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::accuracy("expansion remainder", f64::INFINITY, tol));
    }
    Ok(r)
}

/// ζ(s) = (1/Γ(s)) ∫₀^∞ t^{s−1} (θ(t) − q) dt for any heat trace tending to q.
pub fn relative_zeta_from_trace<T: HeatTrace + ?Sized>(
    theta: &T,
    coeffs: &SmallTimeCoeffs,
    q: f64,
    s: Complex64,
    tol: f64,
) -> Result<Complex64> {
    if !(s.re > 1.5) {
        return Err(Error::domain(format!("relative zeta needs Re s > 3/2, got {s}")));
    }
    let far_probe = theta.value(60.0) - q;
    if !(far_probe.abs() <= 1e-6 * q.abs().max(1.0)) {
        return Err(Error::domain(format!(
            "heat trace does not approach {q} at large time (θ(60) − q = {far_probe:e})"
        )));
    }
    let half = s - 0.5;
    let closed = coeffs.a / (s - 1.5) - coeffs.b / (half * half) + coeffs.c / half + (coeffs.d - q) / s;
    let opts = QuadOptions::rel_abs(tol * 1e-2, tol * 1e-3);
    let near = integrate(
        |t: f64| {
            if t == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            ((s - 1.0) * t.ln()).exp() * theta.remainder(t, coeffs)
        },
        0.0,
        1.0,
        &opts,
    )?;
    let far = integrate_to_infinity(|t: f64| ((s - 1.0) * t.ln()).exp() * (theta.value(t) - q), 1.0, &opts)?;
    let value = (closed + near.value + far.value) / gamma(s);
    let error = (near.error + far.error) / gamma(s).norm();
    if !(error <= tol * value.norm().max(1.0)) {
        return Err(Error::accuracy("relative zeta quadrature", error, tol));
    }
    Ok(value)
}

/// The relative zeta function of the orbifold data.
pub fn relative_zeta(s: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<Complex64> {
    let theta = GeometricTheta::new(orbifold, tol * 1e-3)?;
    let coeffs = theta.coeffs();
    let v = relative_zeta_from_trace(&theta, &coeffs, orbifold.q_chi() as f64, s, tol);
    if let Some(e) = theta.take_error() {
        return Err(e);
    }
    v
}

/// Which closed form the numeric route agrees with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjudication {
    Theorem,
    Corollary,
}

impl Adjudication {
    pub fn label(&self) -> &'static str {
        match self {
            Adjudication::Theorem => "theorem",
            Adjudication::Corollary => "corollary",
        }
    }
}

/// Both routes to the determinant at one s.
#[derive(Debug, Clone, PartialEq)]
pub struct DetReport {
    pub s: Complex64,
    pub closed: ClosedDet,
    pub numeric: Option<NumericDet>,
    pub gap_theorem: Option<f64>,
    pub gap_corollary: Option<f64>,
    pub gap_family: Option<f64>,
    pub adjudicated: Option<Adjudication>,
}

impl DetReport {
    /// |numeric − closed| for the adjudicated form.
    pub fn route_gap(&self) -> Option<f64> {
        match self.adjudicated? {
            Adjudication::Theorem => self.gap_theorem,
            Adjudication::Corollary => self.gap_corollary,
        }
    }
}

pub fn det_report(s: Complex64, orbifold: &OrbifoldData, tol: f64, closed_only: bool) -> Result<DetReport> {
    let closed = log_det_closed(s, orbifold, tol)?;
    if closed_only {
        return Ok(DetReport {
            s,
            closed,
            numeric: None,
            gap_theorem: None,
            gap_corollary: None,
            gap_family: None,
            adjudicated: None,
        });
    }
    let numeric = log_det_numeric(s, orbifold, tol)?;
    let gt = (numeric.value - closed.theorem_form).norm();
    let gc = (numeric.value - closed.corollary_form).norm();
    let gf = (numeric.value - closed.family_form).norm();
    Ok(DetReport {
        s,
        closed,
        numeric: Some(numeric),
        gap_theorem: Some(gt),
        gap_corollary: Some(gc),
        gap_family: Some(gf),
        adjudicated: Some(if gt <= gc { Adjudication::Theorem } else { Adjudication::Corollary }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::synthetic;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d1_constant() {
        assert!((EULER_GAMMA + 2.0 * LN_2 - 2.0 - D1_COCOMPACT).abs() < 1e-16);
    }

    #[test]
    fn empty_list_gives_unit_zeta() {
        let mut orb = synthetic::flagship();
        orb.loxodromic.clear();
        assert_eq!(selberg_zeta_log(c(3.0, 0.0), &orb, 1e-12).unwrap().value, c(0.0, 0.0));
        assert_eq!(selberg_zeta_product(c(3.0, 0.0), &orb, 1e-12).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn omega_vanishes_without_cusp() {
        assert_eq!(omega(c(2.0, 0.0), &synthetic::flagship(), 1e-10).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn zeta_needs_half_plane() {
        assert!(selberg_zeta_log(c(1.0, 0.0), &synthetic::flagship(), 1e-10).is_err());
    }

    #[test]
    fn product_needs_spectral_data() {
        let mut orb = synthetic::flagship();
        orb.loxodromic[0].spectral = None;
        assert!(matches!(selberg_zeta_product(c(3.0, 0.0), &orb, 1e-10), Err(Error::Data(_))));
    }
}
