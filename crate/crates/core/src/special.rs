//! Complex gamma-family functions used throughout the crate.
//!
//! `ln_gamma` and `digamma` shift the argument to the right half plane until
//! |z| is large enough for the Stirling series, then undo the shift with the
//! recurrence. Both keep about 15 significant digits away from poles.

use num_complex::Complex64;
use std::f64::consts::PI;

pub use libm::erfc;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// ln(2π)/2
pub const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_617_6;

const ASYMPTOTIC_RADIUS: f64 = 15.0;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k), k = 1..8
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

fn shift_count(z: Complex64) -> usize {
    if z.norm() >= ASYMPTOTIC_RADIUS && z.re >= 0.0 {
        0
    } else {
        (ASYMPTOTIC_RADIUS - z.re).ceil().max(0.0) as usize
    }
}

fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += term * c;
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series
}

/// Asymptotic tail of ψ(z) − ln z, valid for large |z| off the negative axis.
fn digamma_log_tail(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for c in DIGAMMA_SERIES {
        series += term * c;
        term *= inv2;
    }
    -0.5 * inv - series
}

/// Logarithm of the gamma function on the branch that is continuous away
/// from the negative real axis (the same branch as `scipy.special.loggamma`).
///
/// At the poles z = 0, −1, −2, … the real part is +∞.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < -40.0 {
        // reflection; the imaginary part is only fixed modulo 2π here
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let n = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    stirling_ln_gamma(z + n as f64) - correction
}

/// Γ(z) for complex z. Returns an infinite value at the poles.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(gamma_real(z.re), 0.0);
    }
    ln_gamma(z).exp()
}

/// Γ(x) for real x, signed correctly on the negative axis.
pub fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_real(1.0 - x));
    }
    ln_gamma(Complex64::new(x, 0.0)).re.exp()
}

/// The digamma function ψ = Γ′/Γ.
pub fn digamma(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Complex64::new(f64::NAN, 0.0);
    }
    if z.re < -40.0 {
        let cot = (Complex64::new(PI, 0.0) * z).cos() / (Complex64::new(PI, 0.0) * z).sin();
        return digamma(1.0 - z) - PI * cot;
    }
    let n = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).inv();
    }
    let w = z + n as f64;
    w.ln() + digamma_log_tail(w) - correction
}

/// ψ(z) − ln z without forming the two large logarithms separately.
pub fn digamma_minus_log(z: Complex64) -> Complex64 {
    if z.norm() >= ASYMPTOTIC_RADIUS && z.re >= 0.0 {
        return digamma_log_tail(z);
    }
    digamma(z) - z.ln()
}

/// ψ(1 + ix) for real x, returned as its real part (the imaginary part is
/// odd in x and drops out of every symmetric integral in the crate).
pub fn re_digamma_one_plus_ix(x: f64) -> f64 {
    digamma(Complex64::new(1.0, x)).re
}

/// Scaled complementary error function e^{x²} erfc(x).
pub fn erfcx(x: f64) -> f64 {
    if x < 5.0 {
        return (x * x).exp() * erfc(x);
    }
    // Continued fraction 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), bottom up.
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + 0.5 * k as f64 / tail;
    }
    1.0 / (tail * PI.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn erfcx_reference() {
        // scipy.special.erfcx
        assert!((erfcx(0.5) / 0.615_690_344_192_925_8 - 1.0).abs() < 1e-14);
        assert!((erfcx(4.9) / 0.112_879_090_559_758_74 - 1.0).abs() < 1e-12);
        assert!((erfcx(5.1) / 0.108_611_026_313_932_81 - 1.0).abs() < 1e-14);
        assert!((erfcx(40.0) / 0.014_100_335_983_377_815 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_at_half_integers() {
        let rel = |x: f64, y: f64| (x / y - 1.0).abs();
        assert!(rel(gamma_real(0.5), PI.sqrt()) < 1e-14);
        assert!(rel(gamma_real(-0.5), -2.0 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma_real(-1.5), 4.0 * PI.sqrt() / 3.0) < 1e-14);
        assert!(rel(gamma_real(10.0), 362_880.0) < 1e-14);
    }

    #[test]
    fn ln_gamma_complex_reference() {
        // scipy.special.loggamma(1+2j)
        let v = ln_gamma(c(1.0, 2.0));
        assert!((v.re - -1.876_078_786_430_929).abs() < 1e-14);
        assert!((v.im - 0.129_646_316_309_788_3).abs() < 1e-14);
        // scipy.special.loggamma(-2.5+0.5j)
        let v = ln_gamma(c(-2.5, 0.5));
        assert!((v.re - -0.935_085_621_298_277_5).abs() < 1e-13);
        assert!((v.im - -8.870_962_885_247_458).abs() < 1e-13);
    }

    #[test]
    fn digamma_reference_values() {
        assert!((digamma(c(1.0, 0.0)).re + EULER_GAMMA).abs() < 1e-15);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(c(0.5, 0.0)).re - half).abs() < 1e-14);
        // scipy.special.psi(1+3j)
        let v = digamma(c(1.0, 3.0));
        assert!((v.re - 1.107_980_710_710_151_1).abs() < 1e-14);
        assert!((v.im - 1.404_129_680_587_576_3).abs() < 1e-14);
        assert!((digamma(c(-0.5, 0.0)).re - (half + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn digamma_minus_log_is_continuous_at_switch() {
        for &x in &[14.9, 14.999_999, 15.0, 15.000_001, 15.1] {
            let z = c(1.0, x);
            let a = digamma_minus_log(z);
            let b = digamma(z) - z.ln();
            assert!((a - b).norm() < 1e-14, "{x}");
        }
    }

    #[test]
    fn recurrence_holds() {
        for &z in &[c(0.3, 0.7), c(-3.2, 1.1), c(7.0, -20.0), c(-45.5, 0.25)] {
            let lhs = ln_gamma(z + 1.0).exp();
            let rhs = z * ln_gamma(z).exp();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "{z}");
            let d = digamma(z + 1.0) - digamma(z) - z.inv();
            assert!(d.norm() < 1e-12, "{z}");
        }
    }
}
