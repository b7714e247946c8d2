//! Survival amplitude A(t) = ∫₀^∞ ρ(E) e^{−iEt} dE and its decomposition
//! A = A_e + A_ne into the pole (exponential) part and the non-exponential
//! contour integral.
//!
//! Times are in units of 1/(energy unit of the density). For the
//! dimensionless helpers σ_d = 1, so t = 2πn and τ = ω_d t = 4πx_d n.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dos::{refine, BuildOptions, DensityOfStates, DimensionlessResonance, FormFactor};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::quad::{cluster_points, finish_points, integrate_points, QuadOptions};
use crate::special::{complex_power, gamma_real, upper_gamma_scaled_sheet};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The dimensionless helpers evaluate formulas and skip the grid checks.
const FORMULA_ONLY: BuildOptions = BuildOptions {
    check_positivity: false,
    check_normalization: false,
};

/// Which computation supplies A(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Oscillatory quadrature along the real energy axis.
    Quadrature,
    /// Incomplete-gamma closed form (exponential form factor only).
    ClosedForm,
    /// Residue sum plus contour integral.
    Decomposition,
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Route::Quadrature),
            "closed_form" | "closed-form" => Ok(Route::ClosedForm),
            "decomposition" => Ok(Route::Decomposition),
            other => Err(Error::Config(format!("unknown route '{other}'"))),
        }
    }
}

/// A time expressed three ways for the dominant pole.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TimePoint {
    pub t: f64,
    /// τ = ω_d t
    pub tau: f64,
    /// n = σ_d t / (2π), the number of oscillations
    pub n: f64,
}

/// Times at which a curve is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub points: Vec<TimePoint>,
}

impl TimeGrid {
    pub fn from_t(dos: &DensityOfStates, t: &[f64]) -> Self {
        let d = dos.dominant();
        Self {
            points: t
                .iter()
                .map(|&t| TimePoint {
                    t,
                    tau: d.omega * t,
                    n: d.sigma * t / (2.0 * PI),
                })
                .collect(),
        }
    }

    pub fn from_n(dos: &DensityOfStates, n: &[f64]) -> Self {
        let s = dos.dominant().sigma;
        let t: Vec<f64> = n.iter().map(|n| 2.0 * PI * n / s).collect();
        Self::from_t(dos, &t)
    }

    pub fn from_tau(dos: &DensityOfStates, tau: &[f64]) -> Self {
        let w = dos.dominant().omega;
        let t: Vec<f64> = tau.iter().map(|tau| tau / w).collect();
        Self::from_t(dos, &t)
    }

    /// `count` evenly spaced values of n on [lo, hi].
    pub fn linspace_n(dos: &DensityOfStates, lo: f64, hi: f64, count: usize) -> Self {
        let n: Vec<f64> = (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count.max(2) - 1) as f64)
            .collect();
        Self::from_n(dos, &n)
    }
}

/// A_e(t) = −2πi Σ_s R(z_s) e^{−i z_s t}.
pub fn exponential_amplitude(dos: &DensityOfStates, t: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (s, p) in dos.poles().iter().enumerate() {
        sum += dos.residue(s) * (-I * p.z() * t).exp();
    }
    -2.0 * PI * I * sum
}

/// Evaluates ρ(z) off the real axis with precomputed pole weights.
struct ComplexDensity<'a> {
    dos: &'a DensityOfStates,
    z: Vec<Complex64>,
    c: Vec<Complex64>,
}

impl<'a> ComplexDensity<'a> {
    fn new(dos: &'a DensityOfStates) -> Self {
        let z = dos.poles().iter().map(|p| p.z()).collect();
        let c = (0..dos.poles().len()).map(|s| dos.coeff(s)).collect();
        Self { dos, z, c }
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (z, c) in self.z.iter().zip(&self.c) {
            sum += c / (z - w) + c.conj() / (z.conj() - w);
        }
        let wn = (w.ln() * self.dos.nu()).exp();
        0.5 * wn * self.dos.form_factor().eval(w) * sum
    }
}

/// Ray angle below the real axis kept clear of every pole.
fn ray_angle(dos: &DensityOfStates) -> f64 {
    let candidates = [PI / 4.0, PI / 3.0, PI / 6.0, 3.0 * PI / 8.0, PI / 8.0];
    let clearance = |phi: f64| {
        dos.poles()
            .iter()
            .map(|p| (p.z().arg() + phi).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = candidates[0];
    for c in candidates {
        if clearance(c) > clearance(best) + 1e-3 {
            best = c;
        }
    }
    best
}

/// A_ne(t), the contour integral from 0 to −i∞, evaluated along the ray
/// arg z = −φ (φ near π/4) where the integrand decays for every t ≥ 0.
///
/// Poles swept while rotating the path from the imaginary axis to the ray
/// contribute 2πi R_s e^{−iz_s t}.
pub fn nonexponential_amplitude(dos: &DensityOfStates, t: f64) -> Result<Complex64> {
    if t < 0.0 {
        return Err(Error::Config("time must be non-negative".into()));
    }
    let phi = ray_angle(dos);
    let b = match dos.form_factor() {
        FormFactor::Exponential { b } => b,
        _ => 0.0,
    };
    let (sin, cos) = phi.sin_cos();
    let decay = b * cos + t * sin;
    if decay <= 0.0 {
        // constant form factor at t = 0: A(0) = 1 by normalisation
        return Ok(1.0 - exponential_amplitude(dos, 0.0));
    }
    let zmax = dos.poles().iter().map(|p| p.z().norm()).fold(0.0, f64::max);
    let r_max = 3.0 * zmax + (46.0 + 2.0 * (1.0 + zmax * decay).ln()) / decay;
    let dir = Complex64::from_polar(1.0, -phi);
    let freq = (t * cos - b * sin).abs();

    let mut pts = Vec::new();
    let mut r = 1e-9 * zmax.min(1.0 / decay);
    while r < r_max {
        pts.push(r);
        r *= 8.0;
    }
    for p in dos.poles() {
        let z = p.z();
        let gap = z.norm() * (z.arg() + phi).abs().sin();
        cluster_points(z.norm(), 0.5 * gap, 0.0, r_max, &mut pts);
    }
    let mut pts = finish_points(pts, 0.0, r_max);
    if freq > 0.0 {
        pts = refine(&pts, PI / freq);
    }
    let rho = ComplexDensity::new(dos);
    let res = integrate_points(
        |r| {
            let z = dir * r;
            rho.eval(z) * (-I * z * t).exp() * dir
        },
        &pts,
        &QuadOptions::tol(1e-15, 1e-12),
    )?;
    let mut value = res.value;
    for (s, p) in dos.poles().iter().enumerate() {
        if p.z().arg() < -phi {
            value += 2.0 * PI * I * dos.residue(s) * (-I * p.z() * t).exp();
        }
    }
    Ok(value)
}

/// A_ne(t) = −i ∫₀^∞ ρ(−iy) e^{−ty} dy along the negative imaginary axis.
/// Needs t > 0; the cut-off makes the neglected tail below 1e-14.
pub fn nonexponential_amplitude_imaginary_axis(dos: &DensityOfStates, t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::NotApplicable(
            "imaginary-axis integral at t = 0".into(),
        ));
    }
    let nu = dos.nu();
    let y_max = (34.0 + (nu + 1.0) * (1.0 + 1.0 / t).ln()) / t;
    let mut pts = Vec::new();
    let mut y = 1e-9 * y_max;
    while y < y_max {
        pts.push(y);
        y *= 4.0;
    }
    for p in dos.poles() {
        cluster_points(p.z().norm(), 0.1 * p.z().norm(), 0.0, y_max, &mut pts);
    }
    let mut pts = finish_points(pts, 0.0, y_max);
    if let FormFactor::Exponential { b } = dos.form_factor() {
        pts = refine(&pts, PI / b);
    }
    let rho = ComplexDensity::new(dos);
    let r = integrate_points(
        |y| rho.eval(Complex64::new(0.0, -y)) * (-t * y).exp(),
        &pts,
        &QuadOptions::tol(1e-15, 1e-12),
    )?;
    Ok(-I * r.value)
}

/// A(t) by quadrature along the real energy axis. Panels never exceed half a
/// period of the kernel; near each pole the integrand is evaluated in
/// pole-local coordinates. The constant form factor gets its algebraic tail in
/// closed form.
pub fn amplitude_quadrature(dos: &DensityOfStates, t: f64) -> Result<Complex64> {
    let step = if t > 0.0 { Some(PI / t) } else { None };
    let opts = QuadOptions::tol(2e-13, 1e-12);
    match dos.energy_cutoff() {
        Some(e_max) => {
            let r = dos.integrate_real_axis(e_max, step, &opts, |loc| {
                dos.density_loc(loc) * (-I * loc.energy * t).exp()
            })?;
            Ok(r.value)
        }
        None => {
            let zmax = dos.poles().iter().map(|p| p.z().norm()).fold(0.0, f64::max);
            let x_cut = 1e3 * zmax;
            let step = step.map(|h| h.max(x_cut / 2e5));
            let r = dos.integrate_real_axis(x_cut, step, &opts, |loc| {
                dos.density_loc(loc) * (-I * loc.energy * t).exp()
            })?;
            Ok(r.value + algebraic_tail(dos, x_cut, t)?)
        }
    }
}

/// ∫_X^∞ Σ_k c_k E^{ν−1−k} e^{−iEt} dE for the constant form factor, using
/// ∫_X^∞ E^{a−1} e^{−iEt} dE = (it)^{−a} Γ(a, iXt).
fn algebraic_tail(dos: &DensityOfStates, x: f64, t: f64) -> Result<Complex64> {
    let nu = dos.nu();
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 0..12 {
        let mut ck = 0.0;
        for (s, p) in dos.poles().iter().enumerate() {
            ck -= (dos.gamma(s) * complex_power(p.z(), k as f64 - nu)?).re;
        }
        let a = nu - k as f64;
        let piece = if t == 0.0 {
            Complex64::new(-x.powf(a) / a, 0.0)
        } else {
            let w = Complex64::new(0.0, x * t);
            complex_power(Complex64::new(0.0, t), -a)?
                * upper_gamma_scaled_sheet(a, w, 0)?
                * (-w).exp()
        };
        tail += ck * piece;
    }
    Ok(tail)
}

/// Closed-form A(t) for the exponential form factor:
///
/// A(t) = Σ_{±s} e^{iνπ sgn s} γ_s e^{−p z_s} Γ(−ν, −p z_s) / (same with p = b),
/// p = b + it.
///
/// As t grows, −p z_s leaves the principal sheet (the combined argument passes
/// π); the incomplete gamma function is then taken on the neighbouring sheet,
/// which is what keeps the closed form continuous and equal to the quadrature.
pub fn amplitude_closed_form(dos: &DensityOfStates, t: f64) -> Result<Complex64> {
    let b = match dos.form_factor() {
        FormFactor::Exponential { b } => b,
        _ => {
            return Err(Error::NotApplicable(
                "closed form without exponential form factor".into(),
            ))
        }
    };
    let nu = dos.nu();
    let p = Complex64::new(b, t);
    let mut sum = Complex64::new(0.0, 0.0);
    for s in 0..dos.poles().len() {
        let z = dos.poles()[s].z();
        let g = dos.gamma(s);
        for (zz, gg, sgn) in [(z, g, 1.0), (z.conj(), g.conj(), -1.0)] {
            let theta = (-zz).arg() + p.arg();
            let w = -p * zz;
            let m = ((theta - w.arg()) / (2.0 * PI)).round() as i32;
            sum += Complex64::from_polar(1.0, sgn * PI * nu)
                * gg
                * upper_gamma_scaled_sheet(-nu, w, m)?;
        }
    }
    Ok(-0.5 * gamma_real(nu + 1.0)? * sum)
}

/// Closed-form amplitude for a single narrow resonance at n oscillations.
/// Uses p z_s = (b_s + iτ/(2x_s)) ξ_s with σ_d = 1.
pub fn amplitude_closed_exponential(res: &DimensionlessResonance, n: f64) -> Result<Complex64> {
    let dos = res.density_with(FORMULA_ONLY)?;
    amplitude_closed_form(&dos, 2.0 * PI * n)
}

/// Pole and contour parts of the amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeBreakdown {
    pub exponential: Complex64,
    pub nonexponential: Complex64,
}

impl AmplitudeBreakdown {
    pub fn total(&self) -> Complex64 {
        self.exponential + self.nonexponential
    }
}

pub fn amplitude_decomposed(dos: &DensityOfStates, t: f64) -> Result<AmplitudeBreakdown> {
    Ok(AmplitudeBreakdown {
        exponential: exponential_amplitude(dos, t),
        nonexponential: nonexponential_amplitude(dos, t)?,
    })
}

/// A(t) by the selected route.
pub fn amplitude(dos: &DensityOfStates, t: f64, route: Route) -> Result<Complex64> {
    match route {
        Route::Quadrature => amplitude_quadrature(dos, t),
        Route::ClosedForm => amplitude_closed_form(dos, t),
        Route::Decomposition => Ok(amplitude_decomposed(dos, t)?.total()),
    }
}

/// One sample of the survival probability and its three parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalPoint {
    pub time: TimePoint,
    pub amplitude: Complex64,
    pub p: f64,
    pub p_e: f64,
    pub p_ne: f64,
    pub p_i: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    pub route: Route,
    pub points: Vec<SurvivalPoint>,
}

/// P = |A|² with P_e = |A_e|², P_ne = |A_ne|², P_i = 2 Re(A_e* A_ne).
///
/// For the quadrature and closed-form routes A_ne is taken as A − A_e, so the
/// identity P = P_e + P_ne + P_i holds to rounding on every route.
pub fn survival_probability(
    dos: &DensityOfStates,
    grid: &TimeGrid,
    route: Route,
) -> Result<SurvivalCurve> {
    let points = par_map(&grid.points, |tp| -> Result<SurvivalPoint> {
        let a_e = exponential_amplitude(dos, tp.t);
        let (a, a_ne) = match route {
            Route::Decomposition => {
                let a_ne = nonexponential_amplitude(dos, tp.t)?;
                (a_e + a_ne, a_ne)
            }
            _ => {
                let a = amplitude(dos, tp.t, route)?;
                (a, a - a_e)
            }
        };
        Ok(SurvivalPoint {
            time: *tp,
            amplitude: a,
            p: a.norm_sqr(),
            p_e: a_e.norm_sqr(),
            p_ne: a_ne.norm_sqr(),
            p_i: 2.0 * (a_e.conj() * a_ne).re,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SurvivalCurve { route, points })
}

/// Leading large-time form of A_ne: (−i)^{ν+1} β₀ Γ(ν+1) / t^{ν+1}.
pub fn nonexponential_asymptote(dos: &DensityOfStates, t: f64) -> Result<Complex64> {
    let nu = dos.nu();
    let phase = Complex64::from_polar(1.0, -0.5 * PI * (nu + 1.0));
    Ok(phase * dos.beta0() * gamma_real(nu + 1.0)? / t.powf(nu + 1.0))
}

/// Leading large-n form of A_ne for one dimensionless resonance (σ_d = 1):
/// (−i)^{ν+1} g(0) Re(γ_d/ξ_d^{ν+1}) Γ(ν+1) / (2πn)^{ν+1}.
pub fn asymptotic_a_ne(res: &DimensionlessResonance, n: f64) -> Result<Complex64> {
    let dos = res.density_with(FORMULA_ONLY)?;
    nonexponential_asymptote(&dos, 2.0 * PI * n)
}

/// P(t) ≈ β₀² Γ(ν+1)² / t^{2ν+2} once the exponential part has died out.
pub fn large_time_asymptote(dos: &DensityOfStates, t: f64) -> Result<f64> {
    Ok(nonexponential_asymptote(dos, t)?.norm_sqr())
}
