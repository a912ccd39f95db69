//! Adaptive Gauss–Kronrod quadrature (10-point Gauss embedded in 21-point
//! Kronrod) with a global error queue.
//!
//! The panel with the largest error estimate is always bisected next.
//! Final sums are taken in left-to-right panel order so results do not depend
//! on anything but the integrand and the options.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_814_709_125,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// weights of the Gauss nodes XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Values the quadrature can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            max_panels: 1 << 20,
            initial_panels: 4,
        }
    }
}

impl QuadOptions {
    /// Options with the same relative and absolute target.
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            rel_tol: tol,
            abs_tol: tol,
            ..Default::default()
        }
    }

    pub fn rel_abs(rel_tol: f64, abs_tol: f64) -> Self {
        QuadOptions {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    floor: f64,
}

struct Queued<T>(Panel<T>);

impl<T> PartialEq for Queued<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error.total_cmp(&other.0.error) == Ordering::Equal && self.0.a == other.0.a
    }
}
impl<T> Eq for Queued<T> {}
impl<T> PartialOrd for Queued<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Queued<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

fn gauss_kronrod<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fvals = [T::zero(); 21];
    fvals[0] = f(center);
    for j in 0..10 {
        let dx = half * XGK[j];
        fvals[2 * j + 1] = f(center - dx);
        fvals[2 * j + 2] = f(center + dx);
    }
    let mut kronrod = fvals[0] * WGK[10];
    let mut gauss = T::zero();
    let mut res_abs = fvals[0].magnitude() * WGK[10];
    for j in 0..10 {
        let pair = fvals[2 * j + 1] + fvals[2 * j + 2];
        kronrod = kronrod + pair * WGK[j];
        res_abs += WGK[j] * (fvals[2 * j + 1].magnitude() + fvals[2 * j + 2].magnitude());
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (fvals[0] - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fvals[2 * j + 1] - mean).magnitude() + (fvals[2 * j + 2] - mean).magnitude());
    }
    let scale = half.abs();
    res_abs *= scale;
    res_asc *= scale;
    let mut err = (kronrod - gauss).magnitude() * scale;
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    let value = kronrod * half;
    if !value.is_finite_value() {
        err = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error: err,
        floor,
    }
}

/// Integrate `f` over the finite interval [a, b].
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            error: 0.0,
            panels: 0,
        });
    }
    let n0 = opts.initial_panels.max(1);
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<Panel<T>> = Vec::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    for i in 0..n0 {
        let lo = a + (b - a) * i as f64 / n0 as f64;
        let hi = if i + 1 == n0 { b } else { a + (b - a) * (i + 1) as f64 / n0 as f64 };
        let p = gauss_kronrod(&f, lo, hi);
        total = total + p.value;
        total_err += p.error;
        heap.push(Queued(p));
    }
    let mut panels = n0;
    let mut since_resum = 0usize;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if total_err <= target || heap.is_empty() {
            break;
        }
        if panels >= opts.max_panels {
            return Err(Error::Convergence {
                residual: total_err,
                panels,
            });
        }
        let Queued(worst) = heap.pop().expect("heap not empty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.error <= worst.floor || !(mid > worst.a && mid < worst.b) || (worst.b - worst.a).abs() <= 1e-15 * worst.a.abs().max(worst.b.abs()) {
            // at the roundoff floor or too narrow to split
            finished.push(worst);
            continue;
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        heap.push(Queued(left));
        heap.push(Queued(right));
        panels += 1;
        since_resum += 1;
        if since_resum >= 256 {
            since_resum = 0;
            total_err = heap.iter().map(|q| q.0.error).sum::<f64>() + finished.iter().map(|p| p.error).sum::<f64>();
        }
    }
    let mut all: Vec<Panel<T>> = heap.into_iter().map(|q| q.0).collect();
    all.extend(finished);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = T::zero();
    let mut error = 0.0;
    for p in &all {
        value = value + p.value;
        error += p.error;
    }
    if !value.is_finite_value() || !error.is_finite() {
        return Err(Error::Convergence {
            residual: error,
            panels,
        });
    }
    Ok(QuadResult { value, error, panels })
}

/// Integrate `f` over [a, ∞) with the map t = a + u/(1 − u).
pub fn integrate_to_infinity<T, F>(f: F, a: f64, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let mapped = |u: f64| {
        let om = 1.0 - u;
        let t = a + u / om;
        if !t.is_finite() {
            return T::zero();
        }
        let v = f(t) * (1.0 / (om * om));
        if v.is_finite_value() {
            v
        } else {
            T::zero()
        }
    };
    integrate(mapped, 0.0, 1.0, opts)
}

/// Integrate `f` over the whole real line.
pub fn integrate_real_line<T, F>(f: F, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let right = integrate_to_infinity(&f, 0.0, opts)?;
    let left = integrate_to_infinity(|x| f(-x), 0.0, opts)?;
    Ok(QuadResult {
        value: right.value + left.value,
        error: right.error + left.error,
        panels: right.panels + left.panels,
    })
}
