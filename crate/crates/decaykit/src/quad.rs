//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature for complex-valued
//! integrands on finite intervals.
//!
//! Callers split infinite ranges themselves: every integral in this crate has
//! either an exponentially decaying tail with a known cut-off or an explicit
//! analytic tail.

// Nodes and weights keep the digits of the published tables.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn error_component(diff: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = diff.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::new(0.0, 0.0);
    let mut abs_re = fc.re.abs() * WGK[10];
    let mut abs_im = fc.im.abs() * WGK[10];
    let mut fv = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        res_k += (f1 + f2) * WGK[j];
        abs_re += (f1.re.abs() + f2.re.abs()) * WGK[j];
        abs_im += (f1.im.abs() + f2.im.abs()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut asc_re = WGK[10] * (fc.re - mean.re).abs();
    let mut asc_im = WGK[10] * (fc.im - mean.im).abs();
    for j in 0..10 {
        let (f1, f2) = fv[j];
        asc_re += WGK[j] * ((f1.re - mean.re).abs() + (f2.re - mean.re).abs());
        asc_im += WGK[j] * ((f1.im - mean.im).abs() + (f2.im - mean.im).abs());
    }
    let h = half.abs();
    let diff = (res_k - res_g) * half;
    let err = error_component(diff.re, abs_re * h, asc_re * h)
        + error_component(diff.im, abs_im * h, asc_im * h);
    Panel {
        a,
        b,
        value: res_k * half,
        error: err,
    }
}

/// ∫ₐᵇ f(x) dx.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    integrate_points(f, &[a, b], opts)
}

/// ∫ f over [p₀, pₙ] with breakpoints p₁ … pₙ₋₁, refined globally by largest error.
pub fn integrate_points<F: FnMut(f64) -> Complex64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let p = kronrod(&mut f, w[0], w[1]);
        evaluations += 21;
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    while error > opts.abs_tol.max(opts.rel_tol * value.norm()) {
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonconvergence {
                context: "adaptive quadrature",
                estimate: error,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval exhausted at machine resolution; accept its estimate
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = kronrod(&mut f, worst.a, mid);
        let right = kronrod(&mut f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // resum to limit drift from incremental updates
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    value = heap.iter().map(|p| p.value).sum();
    error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<(f64, f64)> {
    let r = integrate_points(|x| Complex64::new(f(x), 0.0), points, opts)?;
    Ok((r.value.re, r.error))
}

/// Geometric breakpoints clustering at `center` with smallest offset `width`,
/// clipped to [lo, hi].
pub(crate) fn cluster_points(center: f64, width: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    if !(width > 0.0) {
        return;
    }
    let mut d = width;
    while d < (hi - lo) {
        for p in [center - d, center + d] {
            if p > lo && p < hi {
                out.push(p);
            }
        }
        d *= 8.0;
    }
    if center > lo && center < hi {
        out.push(center);
    }
}

/// Sort, deduplicate and bracket breakpoints by [lo, hi].
pub(crate) fn finish_points(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.retain(|p| p.is_finite() && *p > lo && *p < hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate_real(|x| x * x * x, &[0.0, 2.0], &QuadOptions::default()).unwrap();
        assert!((r.0 - 4.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_real(|x| x.powf(-0.5), &[0.0, 1.0], &QuadOptions::default()).unwrap();
        assert!((r.0 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn narrow_lorentzian_local_coordinates() {
        let w = 1e-12;
        let mut pts = Vec::new();
        cluster_points(0.0, w, -1.0, 1.0, &mut pts);
        let pts = finish_points(pts, -1.0, 1.0);
        let r = integrate_real(|u| w / (u * u + w * w), &pts, &QuadOptions::default()).unwrap();
        let exact = 2.0 * (1.0 / w).atan();
        assert!((r.0 - exact).abs() < 1e-11, "{} vs {}", r.0, exact);
    }
}
