//! The geometric side of the trace formula for an admissible pair (h, g),
//! the regularized heat trace θ(t) built from it, its small-time expansion
//! and the resolvent-difference pair.

use crate::error::{Error, Result};
use crate::group_model::{ExpandedSpectrum, OrbifoldData};
use crate::kernels::{HeatPair, HeatTrace, SmallTimeCoeffs};
use crate::lattice_siegel::{eta_infinity, kronecker_l, EtaInfinity};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::{digamma, digamma_minus_log, erfcx, re_digamma_one_plus_ix, EULER_GAMMA};
use crate::summation::ComplexNeumaier;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};
use std::sync::Mutex;

/// Coefficient of (log t)/√t in ∫_ℝ e^{−(1+x²)t} ψ(1+ix) dx as t → 0.
pub const DIGAMMA_LOG_COEFF: f64 = -0.886_226_925_452_758_013_649_083_741_670_6;
/// Coefficient of 1/√t in the same expansion, −(√π/2)(γ + log 4).
pub const DIGAMMA_INV_SQRT_COEFF: f64 = -1.740_115_453_456_631_013_469_297_599_072;
/// Constant term of the same expansion.
pub const DIGAMMA_CONST_COEFF: f64 = std::f64::consts::FRAC_PI_2;

const CHUNK: usize = 512;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// sinh x / (cosh x − 1 + q/2), written without overflow for large x.
pub fn cusp_elliptic_kernel(x: f64, q: f64) -> f64 {
    let e = (-x).exp();
    let one_minus = -(-x).exp_m1();
    (-(-2.0 * x).exp_m1()) / (one_minus * one_minus + q * e)
}

/// A test function h on the spectral side together with its Fourier
/// partner g.
pub trait TestFunctionPair: Sync {
    /// h(λ); the trace formula samples it at λ = 1 + x².
    fn h(&self, lambda: Complex64) -> Complex64;

    fn g(&self, x: f64) -> Complex64;

    /// A bound on |g| on [x, ∞) that does not increase with x.
    fn g_majorant(&self, x: f64) -> f64;

    /// ∫_ℝ h(1 + x²) x² dx.
    fn identity_integral(&self, tol: f64) -> Result<Complex64> {
        let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
        let r = integrate_to_infinity(|x: f64| self.h(Complex64::new(1.0 + x * x, 0.0)) * (x * x), 0.0, &opts)?;
        Ok(2.0 * r.value)
    }

    /// ∫_ℝ h(1 + x²) ψ(1 + ix) dx.
    fn digamma_integral(&self, tol: f64) -> Result<Complex64> {
        let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
        let r = integrate_to_infinity(
            |x: f64| self.h(Complex64::new(1.0 + x * x, 0.0)) * re_digamma_one_plus_ix(x),
            0.0,
            &opts,
        )?;
        Ok(2.0 * r.value)
    }

    /// ∫₀^∞ g(x) sinh x / (cosh x − 1 + q/2) dx.
    fn cusp_elliptic_integral(&self, q: f64, tol: f64) -> Result<Complex64> {
        let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
        let r = integrate_to_infinity(|x: f64| self.g(x) * cusp_elliptic_kernel(x, q), 0.0, &opts)?;
        Ok(r.value)
    }
}

/// Σ_{n≥1} (−y)^n c_n / Γ(n/2 + 1) with c_n = 1 or 1/(n + 1), for small y.
fn erfcx_series(y: f64, averaged: bool) -> f64 {
    // Γ(n/2 + 1) by the recurrence over each parity.
    let mut gamma_odd = PI.sqrt() / 2.0;
    let mut gamma_even = 1.0;
    let mut power = 1.0;
    let mut sum = 0.0;
    for n in 1..60 {
        power *= -y;
        let g = if n % 2 == 1 {
            if n > 1 {
                gamma_odd *= n as f64 / 2.0;
            }
            gamma_odd
        } else {
            gamma_even *= n as f64 / 2.0;
            gamma_even
        };
        let term = power / g / if averaged { (n + 1) as f64 } else { 1.0 };
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// erfcx(y) − 1 without cancellation near y = 0.
fn erfcx_minus_one(y: f64) -> f64 {
    if y < 0.1 {
        erfcx_series(y, false)
    } else {
        erfcx(y) - 1.0
    }
}

/// ∫₀¹ (erfcx(a y) − 1) da.
fn erfcx_minus_one_mean(y: f64, tol: f64) -> Result<f64> {
    if y < 0.5 {
        return Ok(erfcx_series(y, true));
    }
    let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
    Ok(integrate(|a: f64| erfcx_minus_one(a * y), 0.0, 1.0, &opts)?.value)
}

/// Re ψ(1+ix) − ½ log(1+x²) + 5/(12(1+x²)), which decays like x⁻⁴.
fn digamma_residual(x: f64) -> f64 {
    if x.abs() >= 100.0 {
        let y = 1.0 / (x * x);
        let c = [-19.0 / 120.0, 16.0 / 63.0, -23.0 / 80.0, 1.0 / 132.0 - 0.1 + 5.0 / 12.0];
        return y * y * (c[0] + y * (c[1] + y * (c[2] + y * c[3])));
    }
    digamma_minus_log(Complex64::new(1.0, x)).re + 5.0 / (12.0 * (1.0 + x * x))
}

/// ∫_ℝ e^{−tx²} Re ψ(1+ix) dx split as (singular, smooth − π/2): the
/// singular part √(π/t)(−γ − 2 log 2 − log t)/2 carries the t → 0 growth,
/// and the smooth part is returned as its deviation from the limit π/2,
/// which is O(√t) and computed without cancellation.
fn heat_digamma_parts(t: f64, tol: f64) -> Result<(f64, f64)> {
    let singular = 0.5 * (PI / t).sqrt() * (-EULER_GAMMA - 2.0 * LN_2 - t.ln());
    let rt = t.sqrt();
    let mean = erfcx_minus_one_mean(rt, tol)?;
    let opts = QuadOptions::rel_abs(tol, tol * 1e-2 * t.min(1.0));
    let rest = integrate_to_infinity(|x: f64| (-t * x * x).exp_m1() * digamma_residual(x), 0.0, &opts)?;
    Ok((singular, PI * mean - 5.0 * PI / 12.0 * erfcx_minus_one(rt) + 2.0 * rest.value))
}

impl TestFunctionPair for HeatPair {
    fn h(&self, lambda: Complex64) -> Complex64 {
        HeatPair::h(self, lambda)
    }

    fn g(&self, x: f64) -> Complex64 {
        Complex64::new(HeatPair::g(self, x), 0.0)
    }

    fn g_majorant(&self, x: f64) -> f64 {
        HeatPair::g(self, x.max(0.0))
    }

    fn identity_integral(&self, _tol: f64) -> Result<Complex64> {
        let t = self.t;
        Ok(Complex64::new(PI.sqrt() * (-t).exp() / (2.0 * t * t.sqrt()), 0.0))
    }

    fn digamma_integral(&self, tol: f64) -> Result<Complex64> {
        let (singular, deviation) = heat_digamma_parts(self.t, tol)?;
        Ok(Complex64::new((-self.t).exp() * (singular + DIGAMMA_CONST_COEFF + deviation), 0.0))
    }

    fn cusp_elliptic_integral(&self, q: f64, tol: f64) -> Result<Complex64> {
        let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
        let cut = (3000.0 * self.t).sqrt();
        let r = integrate(|x: f64| HeatPair::g(self, x) * cusp_elliptic_kernel(x, q), 0.0, cut, &opts)?;
        Ok(Complex64::new(r.value, 0.0))
    }
}

/// h(w) = 1/(s² + w − 1) − 1/(B² + w − 1), g(x) = e^{−s|x|}/2s − e^{−B|x|}/2B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventPair {
    pub s: Complex64,
    pub b: Complex64,
}

impl ResolventPair {
    pub fn new(s: Complex64, b: Complex64) -> Result<Self> {
        if !(s.re > 1.0 && b.re > 1.0) {
            return Err(Error::domain(format!("resolvent pair needs Re s, Re B > 1, got {s}, {b}")));
        }
        Ok(ResolventPair { s, b })
    }
}

impl TestFunctionPair for ResolventPair {
    fn h(&self, lambda: Complex64) -> Complex64 {
        1.0 / (self.s * self.s + lambda - 1.0) - 1.0 / (self.b * self.b + lambda - 1.0)
    }

    fn g(&self, x: f64) -> Complex64 {
        let x = x.abs();
        (-self.s * x).exp() / (2.0 * self.s) - (-self.b * x).exp() / (2.0 * self.b)
    }

    fn g_majorant(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        (-self.s.re * x).exp() / (2.0 * self.s.norm()) + (-self.b.re * x).exp() / (2.0 * self.b.norm())
    }

    fn identity_integral(&self, _tol: f64) -> Result<Complex64> {
        Ok(PI * (self.b - self.s))
    }

    fn digamma_integral(&self, _tol: f64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        Ok(PI * (digamma(one + self.s) / self.s - digamma(one + self.b) / self.b))
    }
}

/// Σ c_k (h_k, g_k). Integrals fall back to quadrature.
pub struct PairCombination<'a> {
    pub parts: Vec<(Complex64, &'a dyn TestFunctionPair)>,
}

impl TestFunctionPair for PairCombination<'_> {
    fn h(&self, lambda: Complex64) -> Complex64 {
        self.parts.iter().map(|(c, p)| c * p.h(lambda)).sum()
    }

    fn g(&self, x: f64) -> Complex64 {
        self.parts.iter().map(|(c, p)| c * p.g(x)).sum()
    }

    fn g_majorant(&self, x: f64) -> f64 {
        self.parts.iter().map(|(c, p)| c.norm() * p.g_majorant(x)).sum()
    }
}

/// One value per term family on the geometric side, plus their total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricBreakdown {
    pub identity_term: Complex64,
    pub elliptic_term: Complex64,
    pub loxodromic_term: Complex64,
    pub scattering_term: Complex64,
    pub cuspidal_elliptic_term: Complex64,
    pub parabolic_term: Complex64,
    pub total: Complex64,
    /// Bound (or estimate, see `tail_rigorous`) on the omitted loxodromic classes.
    pub loxodromic_tail: f64,
    pub tail_rigorous: bool,
}

/// Data-dependent constants shared by every evaluation of the geometric side.
#[derive(Debug, Clone)]
pub struct GeometricContext<'a> {
    pub orbifold: &'a OrbifoldData,
    pub spectrum: ExpandedSpectrum,
    pub eta: Option<EtaInfinity>,
    /// Σ L(Λ∞, ψ_l) over the nonsingular lattice characters.
    pub lattice_l_sum: f64,
    explicit_tail_start: Option<f64>,
}

impl<'a> GeometricContext<'a> {
    pub fn new(orbifold: &'a OrbifoldData) -> Result<Self> {
        let spectrum = ExpandedSpectrum::new(orbifold);
        let (eta, lattice_l_sum) = match &orbifold.cusp {
            None => (None, 0.0),
            Some(c) => {
                let eta = eta_infinity(&c.lattice, c.eta_inf)?;
                let mut sum = 0.0;
                for psi in &c.characters {
                    sum += kronecker_l(&c.lattice, psi)?;
                }
                (Some(eta), sum)
            }
        };
        let explicit_tail_start = orbifold
            .loxodromic
            .iter()
            .filter(|c| c.spectral.is_none())
            .map(|c| c.norm().ln())
            .reduce(f64::max);
        Ok(GeometricContext {
            orbifold,
            spectrum,
            eta,
            lattice_l_sum,
            explicit_tail_start,
        })
    }

    pub fn l_ratio(&self) -> f64 {
        self.orbifold.cusp.as_ref().map_or(0.0, |c| c.l_ratio())
    }

    fn index(&self) -> f64 {
        self.orbifold.cusp.as_ref().map_or(1.0, |c| c.lattice.index as f64)
    }

    /// C₁: the coefficient of g(0) collected from the elliptic, cuspidal
    /// elliptic and parabolic families.
    pub fn g0_coefficient(&self) -> Complex64 {
        let mut total = self.orbifold.elliptic_number();
        if let Some(c) = &self.orbifold.cusp {
            for ce in &c.cuspidal_elliptic {
                total += 2.0 * ce.coefficient() * ce.c_abs.ln();
            }
            let eta = self.eta.map_or(0.0, |e| e.value);
            total += (c.l_inf as f64 * (0.5 * eta - EULER_GAMMA) + self.lattice_l_sum) / self.index();
        }
        total
    }

    fn loxodromic_sum<P: TestFunctionPair + ?Sized>(&self, pair: &P) -> Complex64 {
        let partials: Vec<Complex64> = self
            .spectrum
            .terms
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = ComplexNeumaier::new();
                for t in chunk {
                    acc.add(t.weight * pair.g(t.log_norm));
                }
                acc.value()
            })
            .collect();
        let mut acc = ComplexNeumaier::new();
        for p in partials {
            acc.add(p);
        }
        acc.value()
    }

    fn explicit_tail_estimate<P: TestFunctionPair + ?Sized>(&self, pair: &P) -> f64 {
        let Some(start) = self.explicit_tail_start else {
            return 0.0;
        };
        let dim = self.orbifold.dim_v as f64;
        let opts = QuadOptions::rel_abs(1e-6, 1e-300);
        match integrate_to_infinity(|l: f64| l.exp() * pair.g_majorant(l), start, &opts) {
            Ok(r) if r.value.is_finite() => dim * r.value,
            _ => f64::INFINITY,
        }
    }

    pub fn geometric_side<P: TestFunctionPair + ?Sized>(&self, pair: &P, tol: f64) -> Result<GeometricBreakdown> {
        let orb = self.orbifold;
        let dim = orb.dim_v as f64;
        let g0 = pair.g(0.0);
        let h1 = pair.h(Complex64::new(1.0, 0.0));

        let identity_term = orb.volume * dim / (4.0 * PI * PI) * pair.identity_integral(tol)?;
        let elliptic_term = orb.elliptic_number() * g0;

        let loxodromic_term = self.loxodromic_sum(pair);
        let rigorous = self.spectrum.tail_bound(|l| pair.g_majorant(l));
        if rigorous > tol {
            return Err(Error::accuracy("loxodromic tail", rigorous, tol));
        }
        let estimate = self.explicit_tail_estimate(pair);

        let mut scattering_term = zero();
        let mut cuspidal_elliptic_term = zero();
        let mut parabolic_term = zero();
        if let Some(c) = &orb.cusp {
            scattering_term = -c.tr_s0 * h1 / 4.0;
            let mut acc = ComplexNeumaier::new();
            for ce in &c.cuspidal_elliptic {
                let integral = pair.cusp_elliptic_integral(ce.q(), tol)?;
                acc.add(ce.coefficient() * (2.0 * g0 * ce.c_abs.ln() + integral));
            }
            cuspidal_elliptic_term = acc.value();
            let l_ratio = c.l_ratio();
            let index = c.lattice.index as f64;
            if c.l_inf > 0 {
                let eta = self.eta.map_or(0.0, |e| e.value);
                let psi = pair.digamma_integral(tol)?;
                parabolic_term = l_ratio * (h1 / 4.0 + g0 * (0.5 * eta - EULER_GAMMA) - psi / (2.0 * PI));
            }
            parabolic_term += g0 * self.lattice_l_sum / index;
        }

        let mut acc = ComplexNeumaier::new();
        for v in [
            identity_term,
            elliptic_term,
            loxodromic_term,
            scattering_term,
            cuspidal_elliptic_term,
            parabolic_term,
        ] {
            acc.add(v);
        }
        Ok(GeometricBreakdown {
            identity_term,
            elliptic_term,
            loxodromic_term,
            scattering_term,
            cuspidal_elliptic_term,
            parabolic_term,
            total: acc.value(),
            loxodromic_tail: rigorous + estimate,
            tail_rigorous: self.explicit_tail_start.is_none(),
        })
    }
}

/// Evaluates every term family of the geometric side for the pair.
pub fn geometric_side<P: TestFunctionPair + ?Sized>(
    pair: &P,
    orbifold: &OrbifoldData,
    tol: f64,
) -> Result<GeometricBreakdown> {
    GeometricContext::new(orbifold)?.geometric_side(pair, tol)
}

/// e^{−t} − 1 + t
fn exp_minus_linear(t: f64) -> f64 {
    if t < 0.01 {
        let mut term = t * t / 2.0;
        let mut sum = 0.0;
        for k in 3..12 {
            sum += term;
            term *= -t / k as f64;
        }
        sum
    } else {
        (-t).exp_m1() + t
    }
}

/// θ(t) = tr(e^{−Δt} − e^{−Δ₀t}p₀), defined through the geometric side of
/// the trace formula with the heat pair and the cusp corrections.
pub struct GeometricTheta<'a> {
    ctx: GeometricContext<'a>,
    tol: f64,
    coeffs: SmallTimeCoeffs,
    identity_coeff: f64,
    g0_coeff: f64,
    h1_coeff: f64,
    failure: Mutex<Option<Error>>,
}

impl<'a> GeometricTheta<'a> {
    pub fn new(orbifold: &'a OrbifoldData, tol: f64) -> Result<Self> {
        let ctx = GeometricContext::new(orbifold)?;
        check_real(&ctx)?;
        let dim = orbifold.dim_v as f64;
        let l_ratio = ctx.l_ratio();
        let k = orbifold.k_inf() as f64;
        let log_y = orbifold.cusp.as_ref().map_or(0.0, |c| c.y.ln());
        let identity_coeff = orbifold.volume * dim * PI.sqrt() / (8.0 * PI * PI);
        let g0_coeff = ctx.g0_coefficient().re + k * log_y;
        let h1_coeff = (l_ratio + k) / 4.0;
        let sqrt_pi = PI.sqrt();
        let coeffs = SmallTimeCoeffs {
            a: identity_coeff,
            b: -l_ratio * DIGAMMA_LOG_COEFF / (2.0 * PI),
            c: -identity_coeff + g0_coeff / (2.0 * sqrt_pi) - l_ratio * DIGAMMA_INV_SQRT_COEFF / (2.0 * PI),
            d: h1_coeff - l_ratio * DIGAMMA_CONST_COEFF / (2.0 * PI),
        };
        Ok(GeometricTheta {
            ctx,
            tol,
            coeffs,
            identity_coeff,
            g0_coeff,
            h1_coeff,
            failure: Mutex::new(None),
        })
    }

    pub fn coeffs(&self) -> SmallTimeCoeffs {
        self.coeffs
    }

    pub fn context(&self) -> &GeometricContext<'a> {
        &self.ctx
    }

    /// θ(t) with the breakdown of the geometric side it came from.
    pub fn evaluate(&self, t: f64) -> Result<(f64, GeometricBreakdown)> {
        let pair = HeatPair::new(t)?;
        let br = self.ctx.geometric_side(&pair, self.tol)?;
        let orb = self.ctx.orbifold;
        let mut total = br.total.re;
        if let Some(c) = &orb.cusp {
            let e = (-t).exp();
            let restored = c.tr_s0 * e / 4.0;
            assert!(
                (br.scattering_term.re + restored).abs() <= 1e-15 * restored.abs().max(1e-300),
                "scattering terms failed to cancel"
            );
            let k = c.k_inf as f64;
            total += restored + e / (4.0 * PI * t).sqrt() * k * c.y.ln() + e * k / 4.0;
        }
        Ok((total, br))
    }

    pub fn theta(&self, t: f64) -> Result<f64> {
        self.evaluate(t).map(|(v, _)| v)
    }

    /// θ(t) − E(t) with every cancelling pair of terms combined analytically.
    pub fn stable_remainder(&self, t: f64) -> Result<f64> {
        let pair = HeatPair::new(t)?;
        let rt = t.sqrt();
        let em1 = (-t).exp_m1();
        let mut r = self.identity_coeff * exp_minus_linear(t) / (t * rt);
        r += self.g0_coeff / (2.0 * PI.sqrt()) * em1 / rt;
        r += self.h1_coeff * em1;
        let l_ratio = self.ctx.l_ratio();
        if l_ratio != 0.0 {
            let (singular, deviation) = heat_digamma_parts(t, self.tol)?;
            r -= l_ratio / (2.0 * PI) * (em1 * (singular + DIGAMMA_CONST_COEFF) + (-t).exp() * deviation);
        }
        r += self.ctx.loxodromic_sum(&pair).re;
        if let Some(c) = &self.ctx.orbifold.cusp {
            for ce in &c.cuspidal_elliptic {
                r += (ce.coefficient() * pair.cusp_elliptic_integral(ce.q(), self.tol)?).re;
            }
        }
        Ok(r)
    }

    /// The first error swallowed by the `HeatTrace` interface, if any.
    pub fn take_error(&self) -> Option<Error> {
        self.failure.lock().ok().and_then(|mut f| f.take())
    }

    fn record(&self, e: Error) -> f64 {
        if let Ok(mut f) = self.failure.lock() {
            if f.is_none() {
                *f = Some(e);
            }
        }
        f64::NAN
    }
}

impl HeatTrace for GeometricTheta<'_> {
    fn value(&self, t: f64) -> f64 {
        self.theta(t).unwrap_or_else(|e| self.record(e))
    }

    fn remainder(&self, t: f64, coeffs: &SmallTimeCoeffs) -> f64 {
        if *coeffs == self.coeffs {
            self.stable_remainder(t).unwrap_or_else(|e| self.record(e))
        } else {
            self.value(t) - coeffs.eval(t)
        }
    }
}

/// θ is real only when the class data is closed under inversion; a
/// synthetic table with unpaired complex characters gives a complex
/// "heat trace" that the Mellin machinery cannot use.
fn check_real(ctx: &GeometricContext) -> Result<()> {
    let orb = ctx.orbifold;
    let scale = |z: Complex64| z.norm().max(1.0);
    let e = orb.elliptic_number();
    if e.im.abs() > 1e-10 * scale(e) {
        return Err(Error::domain("elliptic characters do not sum to a real number"));
    }
    let mut i = 0;
    let terms = &ctx.spectrum.terms;
    while i < terms.len() {
        let mut j = i;
        let mut acc = zero();
        let mut mag = 0.0;
        while j < terms.len() && (terms[j].log_norm - terms[i].log_norm).abs() <= 1e-12 * terms[i].log_norm {
            acc += terms[j].weight;
            mag += terms[j].weight.norm();
            j += 1;
        }
        if acc.im.abs() > 1e-10 * mag.max(1e-300) {
            return Err(Error::domain(format!(
                "loxodromic weights at log N = {} are not real in total",
                terms[i].log_norm
            )));
        }
        i = j;
    }
    if let Some(c) = &orb.cusp {
        let total: Complex64 = c.cuspidal_elliptic.iter().map(|x| x.coefficient()).sum();
        if total.im.abs() > 1e-10 * scale(total) {
            return Err(Error::domain("cuspidal elliptic characters do not sum to a real number"));
        }
    }
    Ok(())
}

/// θ(t) for the orbifold.
pub fn theta(t: f64, orbifold: &OrbifoldData, tol: f64) -> Result<f64> {
    GeometricTheta::new(orbifold, tol)?.theta(t)
}

/// The coefficients a, b, c, d of θ(t) ≈ a t^{−3/2} + b (log t) t^{−1/2} + c t^{−1/2} + d.
pub fn theta_expansion_coeffs(orbifold: &OrbifoldData) -> Result<SmallTimeCoeffs> {
    Ok(GeometricTheta::new(orbifold, 1e-10)?.coeffs())
}

/// The geometric side for the resolvent pair at (s, B).
pub fn resolvent_breakdown(
    s: Complex64,
    b: Complex64,
    orbifold: &OrbifoldData,
    tol: f64,
) -> Result<GeometricBreakdown> {
    geometric_side(&ResolventPair::new(s, b)?, orbifold, tol)
}

/// (1/2s) Z′/Z(s) − (1/2B) Z′/Z(B) obtained as the loxodromic family of the
/// geometric side for the resolvent pair.
pub fn resolvent_difference(s: Complex64, b: Complex64, orbifold: &OrbifoldData, tol: f64) -> Result<Complex64> {
    if !(s.re < b.re || s == b) {
        return Err(Error::domain("resolvent difference needs Re s < Re B"));
    }
    Ok(resolvent_breakdown(s, b, orbifold, tol)?.loxodromic_term)
}
