//! Autocorrelation of the density of states and the cosine-transform pair
//!
//! P(t) = ∫₀^∞ 𝓡(y) cos(yt) dy,   𝓡(y) = (2/π) ∫₀^∞ P(t) cos(yt) dt,
//!
//! with 𝓡(y) = 2 ∫₀^∞ ρ(x) ρ(x+y) dx.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dos::{DensityOfStates, FormFactor};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::quad::{cluster_points, finish_points, integrate_points, QuadOptions};
use crate::special::{complex_power, gamma_real, upper_incomplete_gamma};
use crate::survival::{amplitude, Route};

/// Largest share of a transform that may come from the analytic tail.
pub const TAIL_LIMIT: f64 = 1e-3;

/// P must have fallen below this value at the end of a sampled series.
pub const P_HORIZON: f64 = 1e-6;

/// 𝓡(y) = 2 ∫₀^∞ ρ(x) ρ(x+y) dx.
pub fn autocorrelation(dos: &DensityOfStates, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Config(
            "autocorrelation offset must be non-negative".into(),
        ));
    }
    let zmax = dos.poles().iter().map(|p| p.z().norm()).fold(0.0, f64::max);
    let x_max = match dos.form_factor() {
        FormFactor::Exponential { b } => 2.0 * zmax + 40.0 / b,
        _ => 1e4 * zmax,
    };
    let smin = dos
        .poles()
        .iter()
        .map(|p| p.sigma)
        .fold(f64::INFINITY, f64::min);
    let mut pts = Vec::new();
    let mut x = 1e-8 * smin;
    while x < x_max {
        pts.push(x);
        x *= 8.0;
    }
    for p in dos.poles() {
        cluster_points(p.sigma, 0.25 * p.omega, 0.0, x_max, &mut pts);
        cluster_points(p.sigma - y, 0.25 * p.omega, 0.0, x_max, &mut pts);
    }
    let pts = finish_points(pts, 0.0, x_max);
    let r = integrate_points(
        |x| Complex64::new(dos.density(x) * dos.density(x + y), 0.0),
        &pts,
        &QuadOptions::tol(1e-12, 1e-11),
    )?;
    let mut value = 2.0 * r.value.re;
    if dos.form_factor() == FormFactor::Constant {
        // ρ(E) ≈ c₁ E^{ν−2} beyond the cut-off
        let c1 = -dos
            .poles()
            .iter()
            .enumerate()
            .map(|(s, p)| {
                (dos.gamma(s) * complex_power(p.z(), 1.0 - dos.nu()).unwrap_or_default()).re
            })
            .sum::<f64>();
        value += 2.0 * c1 * c1 * x_max.powf(2.0 * dos.nu() - 3.0) / (3.0 - 2.0 * dos.nu());
    }
    Ok(value)
}

/// Dominant-pole approximation 8π ω_d |R_d|² / (y² + ω_d²).
pub fn autocorrelation_lorentzian(dos: &DensityOfStates, y: f64) -> f64 {
    let d = dos.dominant();
    let r = dos.residue(dos.dominant_index());
    8.0 * PI * d.omega * r.norm_sqr() / (y * y + d.omega * d.omega)
}

/// Cosine transform of the pole part P_e = 4π² |Σ R_s e^{−iz_s t}|² over all
/// pole pairs, (2/π) ∫₀^∞ P_e(t) cos(yt) dt.
pub fn autocorrelation_multi_pole(dos: &DensityOfStates, y: f64) -> f64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (s, p) in dos.poles().iter().enumerate() {
        for (q, pq) in dos.poles().iter().enumerate() {
            let a = p.z() - pq.z().conj();
            let w = dos.residue(s) * dos.residue(q).conj();
            sum += w * Complex64::new(0.0, -0.5) * (1.0 / (a - y) + 1.0 / (a + y));
        }
    }
    8.0 * PI * sum.re
}

/// 𝓡 sampled on an offset grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrCurve {
    pub y: Vec<f64>,
    pub r: Vec<f64>,
}

impl AutocorrCurve {
    pub fn sample(dos: &DensityOfStates, y: &[f64]) -> Result<Self> {
        check_grid(y)?;
        let r = par_map(y, |&y| autocorrelation(dos, y))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { y: y.to_vec(), r })
    }
}

/// P(t) sampled on a time grid, with a power-law continuation c t^{−q}.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProbability {
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub tail: Option<PowerTail>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub coefficient: f64,
    pub exponent: f64,
}

impl SampledProbability {
    /// Samples P on a uniform grid [0, t_max] with spacing close to `step` and
    /// appends the large-time law β₀² Γ(ν+1)² t^{−(2ν+2)}.
    pub fn from_dos(dos: &DensityOfStates, t_max: f64, step: f64) -> Result<Self> {
        let count = (t_max / step).ceil().max(2.0) as usize;
        let t: Vec<f64> = (0..=count)
            .map(|k| t_max * k as f64 / count as f64)
            .collect();
        let route = match dos.form_factor() {
            FormFactor::Exponential { .. } => Route::ClosedForm,
            _ => Route::Decomposition,
        };
        let p = par_map(&t, |&t| amplitude(dos, t, route).map(|a| a.norm_sqr()))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let nu = dos.nu();
        let g = gamma_real(nu + 1.0)?;
        Ok(Self {
            t,
            p,
            tail: Some(PowerTail {
                coefficient: (dos.beta0() * g).powi(2),
                exponent: 2.0 * nu + 2.0,
            }),
        })
    }
}

fn check_grid(x: &[f64]) -> Result<()> {
    if x.len() < 3 {
        return Err(Error::InsufficientSampling(
            "need at least three samples".into(),
        ));
    }
    if x[0] != 0.0 {
        return Err(Error::InsufficientSampling(
            "grid must start at zero".into(),
        ));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// P(t) = ∫₀^∞ 𝓡(y) cos(yt) dy from samples. Beyond the last sample 𝓡 is
/// continued as K/y².
pub fn wk_forward(ac: &AutocorrCurve, t: f64) -> Result<f64> {
    check_grid(&ac.y)?;
    if ac.y.len() != ac.r.len() {
        return Err(Error::Config(
            "offset and value lists differ in length".into(),
        ));
    }
    let t = t.abs();
    let body = cosine_filon(&ac.y, &ac.r, t);
    let y_end = *ac.y.last().unwrap();
    let k = ac.r.last().unwrap() * y_end * y_end;
    let tail_size = (k / y_end).abs();
    let total = cosine_filon(&ac.y, &ac.r, 0.0).abs();
    if tail_size > TAIL_LIMIT * total.max(1e-300) {
        return Err(Error::InsufficientSampling(format!(
            "autocorrelation tail {tail_size:e} beyond y = {y_end}"
        )));
    }
    Ok(body + k * power_cosine_tail(-1.0, y_end, t)?)
}

/// 𝓡(y) = (2/π) ∫₀^∞ P(t) cos(yt) dt from samples and the power-law tail.
pub fn wk_inverse(p: &SampledProbability, y: f64) -> Result<f64> {
    check_grid(&p.t)?;
    if p.t.len() != p.p.len() {
        return Err(Error::Config(
            "time and value lists differ in length".into(),
        ));
    }
    let last = *p.p.last().unwrap();
    if last.abs() > P_HORIZON {
        return Err(Error::InsufficientSampling(format!(
            "P = {last:e} at the last sample, need below {P_HORIZON:e}"
        )));
    }
    let y = y.abs();
    let mut value = cosine_filon(&p.t, &p.p, y);
    if let Some(tail) = p.tail {
        if !(tail.exponent > 1.0) {
            return Err(Error::Config("tail exponent must exceed 1".into()));
        }
        let t_end = *p.t.last().unwrap();
        value += tail.coefficient * power_cosine_tail(1.0 - tail.exponent, t_end, y)?;
    }
    Ok(2.0 / PI * value)
}

/// Lifetime ∫₀^∞ P dt.
pub fn lifetime_integral(p: &SampledProbability) -> Result<f64> {
    Ok(0.5 * PI * wk_inverse(p, 0.0)?)
}

/// ∫_X^∞ u^{a−1} cos(ku) du for a < 0, via Re[(−ik)^{−a} Γ(a, −ikX)].
fn power_cosine_tail(a: f64, x: f64, k: f64) -> Result<f64> {
    if k == 0.0 {
        return Ok(-x.powf(a) / a);
    }
    let w = Complex64::new(0.0, -k * x);
    Ok((complex_power(Complex64::new(0.0, -k), -a)? * upper_incomplete_gamma(a, w)?).re)
}

/// ∫ f(x) cos(kx) dx over the samples, with f replaced by quadratics through
/// consecutive sample triples and the products integrated exactly.
pub fn cosine_filon(x: &[f64], f: &[f64], k: f64) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        total += panel(&x[i..i + 3], &f[i..i + 3], x[i], x[i + 2], k);
        i += 2;
    }
    if i + 1 < n {
        // odd number of intervals: last interval from the final triple
        total += panel(&x[n - 3..], &f[n - 3..], x[n - 2], x[n - 1], k);
    }
    total
}

fn panel(x: &[f64], f: &[f64], lo: f64, hi: f64, k: f64) -> f64 {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let u: Vec<f64> = x.iter().map(|x| x - c).collect();
    // Newton form f0 + d1 (u−u0) + d2 (u−u0)(u−u1)
    let d01 = (f[1] - f[0]) / (u[1] - u[0]);
    let d12 = (f[2] - f[1]) / (u[2] - u[1]);
    let d2 = (d12 - d01) / (u[2] - u[0]);
    let gamma = d2;
    let beta = d01 - d2 * (u[0] + u[1]);
    let alpha = f[0] - d01 * u[0] + d2 * u[0] * u[1];
    let theta = k * h;
    let (m0, m1, m2) = cosine_moments(theta);
    // ∫ q(u) cos(k(c+u)) du = cos(kc) ∫(α+γu²)cos(ku) − sin(kc) ∫βu sin(ku)
    let even = alpha * 2.0 * h * m0 + gamma * 2.0 * h.powi(3) * m2;
    let odd = beta * 2.0 * h * h * m1;
    let (s, co) = (k * c).sin_cos();
    co * even - s * odd
}

/// sinθ/θ, (sinθ − θcosθ)/θ² and (θ² sinθ + 2θcosθ − 2sinθ)/θ³.
fn cosine_moments(theta: f64) -> (f64, f64, f64) {
    if theta.abs() < 0.1 {
        let t2 = theta * theta;
        let m0 = 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
        let m1 = theta * (1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0 - t2 * t2 * t2 / 45360.0);
        let m2 = 1.0 / 3.0 - t2 / 10.0 + t2 * t2 / 168.0 - t2 * t2 * t2 / 6480.0;
        (m0, m1, m2)
    } else {
        let (s, c) = theta.sin_cos();
        let t2 = theta * theta;
        (
            s / theta,
            (s - theta * c) / t2,
            (t2 * s + 2.0 * theta * c - 2.0 * s) / (t2 * theta),
        )
    }
}

/// P(t) and the delta-list form of 𝓡 for a discrete spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSpectrum {
    pub p: f64,
    /// (offset, weight): Σ w_n² at offset 0 and 2 w_n w_m at E_n − E_m.
    pub terms: Vec<(f64, f64)>,
}

/// P(t) = Σ w_n² + 2 Σ_{n>m} w_n w_m cos((E_n − E_m) t).
pub fn discrete_spectrum(levels: &[(f64, f64)], t: f64) -> Result<DiscreteSpectrum> {
    let total: f64 = levels.iter().map(|l| l.1).sum();
    if (total - 1.0).abs() > 1e-12 || levels.iter().any(|l| !(l.1 >= 0.0)) {
        return Err(Error::WeightsNotNormalized(total));
    }
    let mut terms = vec![(0.0, levels.iter().map(|l| l.1 * l.1).sum::<f64>())];
    for n in 0..levels.len() {
        for m in 0..n {
            terms.push((levels[n].0 - levels[m].0, 2.0 * levels[n].1 * levels[m].1));
        }
    }
    let p = terms.iter().map(|(e, w)| w * (e * t).cos()).sum();
    Ok(DiscreteSpectrum { p, terms })
}
