//! Upper half-space model of hyperbolic three-space and the action of
//! PSL(2, C) on it.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::Mul;

/// Trace tolerance used when deciding parabolic / elliptic / loxodromic.
pub const CLASSIFY_TOL: f64 = 1e-10;

const MIN_HEIGHT: f64 = 1e-300;

/// A point z + rj of the upper half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub z: Complex64,
    pub r: f64,
}

impl Point {
    pub fn new(z: Complex64, r: f64) -> Result<Self> {
        if !(r.is_finite() && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain("point coordinates must be finite"));
        }
        if r < MIN_HEIGHT {
            return Err(Error::domain(format!("height {r:e} is not positive")));
        }
        Ok(Point { z, r })
    }

    /// The point on the vertical axis at height `r`.
    pub fn on_axis(r: f64) -> Result<Self> {
        Point::new(Complex64::new(0.0, 0.0), r)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i) + {}j", self.z.re, self.z.im, self.r)
    }
}

/// cosh of the hyperbolic distance between two points.
pub fn delta(p: &Point, q: &Point) -> Result<f64> {
    if !(p.r > 0.0 && q.r > 0.0) {
        return Err(Error::domain("non-positive height"));
    }
    let dz = (p.z - q.z).norm_sqr();
    let dr = p.r - q.r;
    // (|z−z'|² + r² + r'²)/(2rr') written as 1 + (|z−z'|² + (r−r')²)/(2rr')
    Ok(1.0 + (dz + dr * dr) / (2.0 * p.r * q.r))
}

/// Hyperbolic distance between two points.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    if !(p.r > 0.0 && q.r > 0.0) {
        return Err(Error::domain("non-positive height"));
    }
    let dz = (p.z - q.z).norm_sqr();
    let dr = p.r - q.r;
    let u = (dz + dr * dr) / (2.0 * p.r * q.r);
    // arccosh(1 + u) = 2 asinh(sqrt(u/2)), stable for small u
    Ok(2.0 * (0.5 * u).sqrt().asinh())
}

/// A unimodular 2×2 complex matrix taken modulo ±I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl GroupElement {
    /// Builds an element from entries, rescaling to determinant one and
    /// choosing the canonical sign.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 1e-300) || !det.norm().is_finite() {
            return Err(Error::domain("singular matrix"));
        }
        let k = det.sqrt().inv();
        let m = GroupElement {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        };
        Ok(m.canonical())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        GroupElement::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        GroupElement { a: one, b: zero, c: zero, d: one }
    }

    /// Translation z ↦ z + w.
    pub fn translation(w: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        GroupElement {
            a: one,
            b: w,
            c: Complex64::new(0.0, 0.0),
            d: one,
        }
        .canonical()
    }

    /// Sign rule: the first nonzero entry of (a, b, c, d) has argument in (−π/2, π/2].
    fn canonical(self) -> Self {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|x| x.re != 0.0 || x.im != 0.0)
            .unwrap_or(Complex64::new(1.0, 0.0));
        let arg = lead.arg();
        if arg > -FRAC_PI_2 && arg <= FRAC_PI_2 {
            self
        } else {
            GroupElement {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .canonical()
    }

    /// Entry-wise distance between the canonical representatives.
    pub fn distance_to(&self, other: &GroupElement) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .map(|x| x.norm())
        .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance_to(&GroupElement::identity()) <= tol
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .canonical()
    }
}

/// Action of a group element on the upper half-space.
pub fn mobius_act(m: &GroupElement, p: &Point) -> Point {
    let cz_d = m.c * p.z + m.d;
    let denom = cz_d.norm_sqr() + m.c.norm_sqr() * p.r * p.r;
    let z = ((m.a * p.z + m.b) * cz_d.conj() + m.a * m.c.conj() * (p.r * p.r)) / denom;
    Point { z, r: p.r / denom }
}

/// Conjugacy type of an element together with its loxodromic invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic {
        trace: f64,
    },
    /// `a` is the eigenvalue of modulus > 1 and `norm` = |a|².
    Loxodromic {
        a: Complex64,
        norm: f64,
    },
}

impl Classification {
    pub fn is_loxodromic(&self) -> bool {
        matches!(self, Classification::Loxodromic { .. })
    }
}

/// Classifies an element by its trace.
pub fn classify(m: &GroupElement) -> Result<Classification> {
    let tr = m.trace();
    let near_two = (tr - 2.0).norm() <= CLASSIFY_TOL || (tr + 2.0).norm() <= CLASSIFY_TOL;
    if near_two {
        let off = m.b.norm().max(m.c.norm()).max((m.a - m.d).norm());
        return Ok(if off <= CLASSIFY_TOL {
            Classification::Identity
        } else {
            Classification::Parabolic
        });
    }
    if tr.im.abs() <= CLASSIFY_TOL && tr.re.abs() < 2.0 - CLASSIFY_TOL {
        return Ok(Classification::Elliptic { trace: tr.re });
    }
    let disc = (tr * tr - 4.0).sqrt();
    let mut lambda = 0.5 * (tr + disc);
    if lambda.norm() < 1.0 {
        lambda = 0.5 * (tr - disc);
    }
    if lambda.norm() - 1.0 <= CLASSIFY_TOL {
        return Err(Error::BoundaryAmbiguous(format!(
            "trace {tr} gives |a| = {} within the tolerance band",
            lambda.norm()
        )));
    }
    Ok(Classification::Loxodromic {
        a: lambda,
        norm: lambda.norm_sqr(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_basic() {
        let j = Point::on_axis(1.0).unwrap();
        let j2 = Point::on_axis(2.0).unwrap();
        assert_eq!(delta(&j, &j).unwrap(), 1.0);
        assert!((delta(&j, &j2).unwrap() - 1.25).abs() < 1e-15);
        assert!(Point::on_axis(0.0).is_err());
        assert!(Point::on_axis(1e-301).is_err());
    }

    #[test]
    fn actions() {
        let p = Point::new(c(0.3, -0.2), 0.7).unwrap();
        let id = GroupElement::identity();
        assert_eq!(mobius_act(&id, &p), p);
        let t = GroupElement::translation(c(1.5, 2.0));
        let q = mobius_act(&t, &p);
        assert!((q.z - c(1.8, 1.8)).norm() < 1e-15 && q.r == p.r);
        let s = GroupElement::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        let j = Point::on_axis(1.0).unwrap();
        let sj = mobius_act(&s, &j);
        assert!(sj.z.norm() < 1e-15 && (sj.r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        let p = GroupElement::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(classify(&p).unwrap(), Classification::Parabolic);
        let e = GroupElement::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(matches!(classify(&e).unwrap(), Classification::Elliptic { .. }));
        let l = GroupElement::from_real(1.0, 1.0, 1.0, 2.0).unwrap();
        match classify(&l).unwrap() {
            Classification::Loxodromic { a, norm } => {
                let g = (3.0 + 5f64.sqrt()) / 2.0;
                assert!((a - c(g, 0.0)).norm() < 1e-14);
                assert!((norm - g * g).abs() < 1e-13);
                assert!((norm - 6.854_101_966).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(classify(&GroupElement::identity()).unwrap(), Classification::Identity);
    }

    #[test]
    fn boundary_band_is_an_error() {
        // trace 2cos(θ) pushed slightly off the real axis
        let th = std::f64::consts::FRAC_PI_2;
        let eps = 8e-11;
        let a = c(th.cos(), th.sin()) * (1.0 + eps);
        let m = GroupElement::new(a, c(0.0, 0.0), c(0.0, 0.0), a.inv()).unwrap();
        assert!(matches!(classify(&m), Err(Error::BoundaryAmbiguous(_))));
    }

    #[test]
    fn sign_rule_identifies_negatives() {
        let m = GroupElement::from_real(2.0, 1.0, 1.0, 1.0).unwrap();
        let n = GroupElement::from_real(-2.0, -1.0, -1.0, -1.0).unwrap();
        assert_eq!(m, n);
        assert!((m.det() - 1.0).norm() < 1e-12);
    }
}
