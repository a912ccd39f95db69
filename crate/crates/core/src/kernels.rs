//! Heat kernel of the hyperbolic Laplacian, the Selberg–Harish-Chandra
//! transform, the Fourier partner g, and the Mellin toolkit used to define
//! regularized determinants.

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions, QuadResult, QuadValue};
use crate::special::{digamma, gamma_real, ln_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

const SERIES_THRESHOLD: f64 = 1e-6;

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("heat time t = {t} must be positive and finite")))
    }
}

/// ln(ρ / sinh ρ), accurate for every ρ ≥ 0.
fn ln_rho_over_sinh(rho: f64) -> f64 {
    if rho < 1e-4 {
        let r2 = rho * rho;
        (1.0 - r2 / 6.0 + 7.0 * r2 * r2 / 360.0).ln()
    } else if rho < 20.0 {
        (rho / rho.sinh()).ln()
    } else {
        rho.ln() - rho + std::f64::consts::LN_2 - (-(-2.0 * rho).exp()).ln_1p()
    }
}

/// The heat kernel u(ρ, t) = (4πt)^{-3/2} (ρ/sinh ρ) e^{-t-ρ²/4t} as a
/// function of hyperbolic distance ρ.
pub fn heat_kernel_distance(rho: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::domain(format!("distance ρ = {rho} must be non-negative")));
    }
    let pref = (4.0 * PI * t).powf(-1.5);
    Ok(pref * (ln_rho_over_sinh(rho) - t - rho * rho / (4.0 * t)).exp())
}

/// The heat kernel as a point-pair function of x = cosh ρ.
pub fn heat_point_pair(x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(x >= 1.0) {
        return Err(Error::domain(format!("point-pair argument x = {x} must be ≥ 1")));
    }
    let u = x - 1.0;
    let pref = (4.0 * PI * t).powf(-1.5);
    if u < SERIES_THRESHOLD {
        // ρ/sinh ρ and ρ² expanded in u = x − 1
        let ratio = 1.0 - u / 3.0 + 2.0 * u * u / 15.0 - 2.0 * u * u * u / 35.0;
        let rho2 = 2.0 * u - u * u / 3.0 + 4.0 * u * u * u / 45.0;
        return Ok(pref * ratio * (-t - rho2 / (4.0 * t)).exp());
    }
    let rho = 2.0 * (0.5 * u).sqrt().asinh();
    heat_kernel_distance(rho, t)
}

/// The matched heat triple (k_t, h_t, g_t) at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatPair {
    pub t: f64,
}

impl HeatPair {
    pub fn new(t: f64) -> Result<Self> {
        check_time(t)?;
        Ok(HeatPair { t })
    }

    pub fn k(&self, x: f64) -> Result<f64> {
        heat_point_pair(x, self.t)
    }

    /// Spectral multiplier h(λ) = e^{-tλ}.
    pub fn h(&self, lambda: Complex64) -> Complex64 {
        (-self.t * lambda).exp()
    }

    /// Fourier partner g(r) = e^{-t} e^{-r²/4t} / √(4πt).
    pub fn g(&self, r: f64) -> f64 {
        (-self.t - r * r / (4.0 * self.t)).exp() / (4.0 * PI * self.t).sqrt()
    }
}

/// sinh(sρ)/s with the s → 0 limit ρ.
fn sinh_over(s: Complex64, rho: f64) -> Complex64 {
    let z = s * rho;
    if z.norm() < 1e-5 {
        let z2 = z * z;
        rho * (1.0 + z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        z.sinh() / s
    }
}

/// Selberg–Harish-Chandra transform h(1 − s²) of a point-pair kernel k.
///
/// Uses t = e^ρ so that ½(t + 1/t) = cosh ρ:
/// h(1 − s²) = 4π ∫₀^∞ k(cosh ρ) (sinh sρ / s) sinh ρ dρ.
pub fn shc_transform<K>(k: K, s: Complex64, tol: f64) -> Result<QuadResult<Complex64>>
where
    K: Fn(f64) -> f64,
{
    if s.re < 0.0 {
        return Err(Error::domain("shc_transform needs Re(s) ≥ 0"));
    }
    let integrand = |rho: f64| {
        let x = rho.cosh();
        if !x.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let kv = k(x);
        if kv == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        sinh_over(s, rho) * (kv * rho.sinh() * 4.0 * PI)
    };
    let opts = QuadOptions::rel_abs(tol, 1e-300);
    integrate_to_infinity(integrand, 0.0, &opts)
}

/// Fourier partner g(r) = (1/2π) ∫ h(1 + x²) e^{-ixr} dx of an even
/// spectral multiplier, computed as (1/π) ∫₀^∞ h(1 + x²) cos(xr) dx.
pub fn fourier_partner<T, H>(h: H, r: f64, tol: f64) -> Result<QuadResult<T>>
where
    T: QuadValue,
    H: Fn(f64) -> T,
{
    let opts = QuadOptions::rel_abs(tol, tol * 1e-3);
    let res = integrate_to_infinity(|x: f64| h(1.0 + x * x) * ((x * r).cos() / PI), 0.0, &opts)?;
    Ok(res)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-14 && z.re < 0.5 && (z.re - z.re.round()).abs() < 1e-14
}

/// X = s² − 1, checked to lie in the half plane Re X > 0.
fn shifted_square(s: Complex64) -> Result<Complex64> {
    let x = s * s - 1.0;
    if !(x.re > 0.0) {
        return Err(Error::domain(format!("Re(s² − 1) must be positive, s = {s}")));
    }
    Ok(x)
}

/// Γ(w − ε)/Γ(w) with the removable and zero cases handled explicitly.
fn gamma_ratio(eps: f64, w: Complex64) -> Result<Complex64> {
    if eps == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let shifted = w - eps;
    if is_nonpositive_integer(shifted) {
        return Err(Error::Pole {
            location: format!("w = {w} (Γ(w − {eps}) has a pole)"),
        });
    }
    if is_nonpositive_integer(w) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((ln_gamma(shifted) - ln_gamma(w)).exp())
}

/// Closed form of (1/Γ(w)) ∫₀^∞ t^{w−1} t^{−ε} e^{−(s²−1)t} dt
/// = (s² − 1)^{ε−w} Γ(w − ε)/Γ(w), principal branch.
pub fn mellin_power_law(eps: f64, w: Complex64, s: Complex64) -> Result<Complex64> {
    if ![0.0, 0.5, 1.5].contains(&eps) {
        return Err(Error::domain(format!("exponent ε = {eps} must be 0, 1/2 or 3/2")));
    }
    let x = shifted_square(s)?;
    let ratio = gamma_ratio(eps, w)?;
    Ok(ratio * ((eps - w) * x.ln()).exp())
}

/// Closed form of (1/Γ(w)) ∫₀^∞ t^{w−1} (log t) t^{−1/2} e^{−(s²−1)t} dt
/// = Γ(w − ½)/Γ(w) (s² − 1)^{½−w} (ψ(w − ½) − log(s² − 1)).
pub fn mellin_log_law(w: Complex64, s: Complex64) -> Result<Complex64> {
    let x = shifted_square(s)?;
    let ratio = gamma_ratio(0.5, w)?;
    let lx = x.ln();
    Ok(ratio * ((0.5 - w) * lx).exp() * (digamma(w - 0.5) - lx))
}

/// Coefficients of θ(t) ≈ a t^{-3/2} + b (log t) t^{-1/2} + c t^{-1/2} + d as t → 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SmallTimeCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SmallTimeCoeffs {
    pub fn eval(&self, t: f64) -> f64 {
        let rt = t.sqrt();
        self.a / (t * rt) + (self.b * t.ln() + self.c) / rt + self.d
    }

    /// ∂/∂w at w = 0 of (1/Γ(w)) ∫₀^∞ t^{w−1} E(t) e^{−(s²−1)t} dt for the
    /// four-term expansion E.
    pub fn mellin_derivative(&self, s: Complex64) -> Result<Complex64> {
        let x = shifted_square(s)?;
        let lx = x.ln();
        let sqrt_x = (0.5 * lx).exp();
        let sqrt_pi = PI.sqrt();
        let psi_neg_half = digamma(Complex64::new(-0.5, 0.0));
        let a_term = x * sqrt_x * gamma_real(-1.5);
        let b_term = sqrt_x * gamma_real(-0.5) * (psi_neg_half - lx);
        let c_term = sqrt_x * (-2.0 * sqrt_pi);
        let d_term = -lx;
        Ok(a_term * self.a + b_term * self.b + c_term * self.c + d_term * self.d)
    }
}

/// A heat trace t ↦ θ(t) together with a way to evaluate θ minus its
/// small-time expansion.
pub trait HeatTrace: Sync {
    fn value(&self, t: f64) -> f64;

    /// θ(t) − E(t). Implementations with a cancellation-free formula should
    /// override this when `coeffs` is their own expansion.
    fn remainder(&self, t: f64, coeffs: &SmallTimeCoeffs) -> f64 {
        self.value(t) - coeffs.eval(t)
    }
}

impl<F> HeatTrace for F
where
    F: Fn(f64) -> f64 + Sync,
{
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// ∂H/∂w(0, s) together with the accumulated quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinDerivative {
    pub value: Complex64,
    pub error: f64,
    /// Contribution of the closed-form expansion terms.
    pub expansion_part: Complex64,
}

/// ∂H/∂w(0, s) for H(w, s) = (1/Γ(w)) ∫₀^∞ t^{w−1} θ(t) e^{−(s²−1)t} dt.
///
/// The expansion E is integrated in closed form over (0, ∞); the remainder
/// θ − E is integrated numerically over (0, 1] (with t = u²) and [1, ∞).
pub fn regularized_mellin_derivative<T>(
    theta: &T,
    coeffs: &SmallTimeCoeffs,
    s: Complex64,
    tol: f64,
) -> Result<MellinDerivative>
where
    T: HeatTrace + ?Sized,
{
    let x = shifted_square(s)?;
    let closed = coeffs.mellin_derivative(s)?;
    let opts = QuadOptions::rel_abs(tol * 1e-2, tol * 1e-3);
    let near = integrate(
        |u: f64| {
            if u == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let t = u * u;
            (-x * t).exp() * (2.0 * theta.remainder(t, coeffs) / u)
        },
        0.0,
        1.0,
        &opts,
    )?;
    let far = integrate_to_infinity(
        |t: f64| (-x * t).exp() * (theta.remainder(t, coeffs) / t),
        1.0,
        &opts,
    )?;
    let value = closed + near.value + far.value;
    let error = near.error + far.error;
    if !(error <= tol * value.norm().max(1.0)) {
        return Err(Error::accuracy("Mellin quadrature", error, tol));
    }
    Ok(MellinDerivative {
        value,
        error,
        expansion_part: closed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn heat_kernel_values() {
        let v = heat_kernel_distance(0.0, 1.0).unwrap();
        assert!((v - (-1f64).exp() / (4.0 * PI).powf(1.5)).abs() < 1e-17);
        // 40-digit evaluation of the closed form
        let v = heat_kernel_distance(1.0, 0.5).unwrap();
        assert!((v / 0.019_875_748_452_065_723_239_207_161_469_965 - 1.0).abs() < 1e-14);
        let v = heat_point_pair(10.0, 0.25).unwrap();
        assert!((v / 5.407_697_921_236_825_441_379_638_821_884_7e-6 - 1.0).abs() < 1e-13);
        assert!(heat_point_pair(0.999, 1.0).is_err());
        assert!(heat_kernel_distance(1.0, 0.0).is_err());
    }

    #[test]
    fn series_branch_matches_closed_form() {
        for &t in &[0.1, 1.0, 3.0] {
            let x = 1.0 + 1e-5;
            let rho = (x + (x * x - 1.0f64).sqrt()).ln();
            let closed = heat_kernel_distance(rho, t).unwrap();
            let u = x - 1.0;
            let pref = (4.0 * PI * t).powf(-1.5);
            let ratio = 1.0 - u / 3.0 + 2.0 * u * u / 15.0 - 2.0 * u * u * u / 35.0;
            let rho2 = 2.0 * u - u * u / 3.0 + 4.0 * u * u * u / 45.0;
            let series = pref * ratio * (-t - rho2 / (4.0 * t)).exp();
            assert!((series / closed - 1.0).abs() < 1e-10, "t = {t}");
            let below = heat_point_pair(1.0 + 0.999_999e-6, t).unwrap();
            let above = heat_point_pair(1.0 + 1.000_001e-6, t).unwrap();
            assert!((below / above - 1.0).abs() < 1e-9);
        }
        let limit = heat_point_pair(1.0, 2.0).unwrap();
        assert!((limit - (-2f64).exp() / (8.0 * PI).powf(1.5)).abs() < 1e-18);
    }

    #[test]
    fn shc_examples() {
        let k1 = |x: f64| heat_point_pair(x, 1.0).unwrap();
        let v = shc_transform(k1, c(0.0, 0.0), 1e-11).unwrap().value;
        assert!((v.re - (-1f64).exp()).abs() < 1e-11 && v.im.abs() < 1e-14);
        let k = |x: f64| heat_point_pair(x, 0.5).unwrap();
        let v = shc_transform(k, c(2.0, 0.0), 1e-11).unwrap().value;
        assert!((v.re / 1.5f64.exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fourier_partner_examples() {
        let pair = HeatPair::new(2.0).unwrap();
        let g = fourier_partner(|l: f64| (-2.0 * l).exp(), 3.0, 1e-12).unwrap().value;
        let expected = (-2f64).exp() / (8.0 * PI).sqrt() * (-9.0f64 / 8.0).exp();
        assert!((g - expected).abs() < 1e-13);
        assert!((pair.g(3.0) - expected).abs() < 1e-16);
    }

    #[test]
    fn mellin_examples() {
        let one = c(1.0, 0.0);
        let v = mellin_power_law(0.0, one, c(2.0, 0.0)).unwrap();
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let v = mellin_power_law(0.5, one, c(2.0, 0.0)).unwrap();
        assert!((v.re - (PI / 3.0).sqrt()).abs() < 1e-14);
        let v = mellin_power_law(1.5, c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((v.re - PI.sqrt() / 8f64.sqrt()).abs() < 1e-14);
        let v = mellin_log_law(one, c(2f64.sqrt(), 0.0)).unwrap();
        let psi_half = -crate::special::EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((v.re - PI.sqrt() * psi_half).abs() < 1e-12);
        assert!(matches!(
            mellin_power_law(0.5, c(0.5, 0.0), c(2.0, 0.0)),
            Err(Error::Pole { .. })
        ));
        assert!(mellin_power_law(0.5, c(0.0, 0.0), c(2.0, 0.0)).unwrap().norm() == 0.0);
    }

    #[test]
    fn regularized_single_eigenvalue() {
        let coeffs = SmallTimeCoeffs {
            d: 1.0,
            ..Default::default()
        };
        let theta = |t: f64| (-3.0 * t).exp();
        let r = regularized_mellin_derivative(&theta, &coeffs, c(2.0, 0.0), 1e-10).unwrap();
        assert!((r.value.re + 6f64.ln()).abs() < 1e-10, "{:?}", r);
    }
}
