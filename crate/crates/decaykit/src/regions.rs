//! Critical times, the regions of the decay law and their piecewise
//! description in terms of the number of oscillations n.
//!
//! Everything here is measured against the dominant pole z_d = σ_d − iω_d/2
//! with x_d = ω_d/(2σ_d), τ = ω_d t and n = σ_d t/(2π), so τ = 4πx_d n.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dos::refine;
use crate::dos::{BuildOptions, DensityOfStates, DimensionlessResonance, Pole};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::moments::{variance, variance_sign_scan, VarianceScan};
use crate::quad::{finish_points, integrate_points, QuadOptions};
use crate::special::gamma_real;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance for declaring R̄² equal to the maximum f₊.
const TANGENCY_TOL: f64 = 1e-12;

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// f(τ) = (1 − (τ/α)²) e^τ, the small-time parabola over the exponential.
pub fn intersection_function(alpha: f64, tau: f64) -> f64 {
    (1.0 - (tau / alpha).powi(2)) * tau.exp()
}

/// Location τ₊ = √(1+α²) − 1 and value f₊ = 2τ₊e^{τ₊}/α² of the maximum of f.
pub fn intersection_maximum(alpha: f64) -> (f64, f64) {
    // √(1+α²) − 1 without cancellation for small α
    let tau = alpha * alpha / ((1.0 + alpha * alpha).sqrt() + 1.0);
    (tau, 2.0 * tau * tau.exp() / (alpha * alpha))
}

/// Roots of f(τ) = R̄² on [0, α], ascending. None when R̄² > f₊, one at τ₊ on
/// tangency, one when R̄² < 1 and two when 1 < R̄² < f₊.
pub fn critical_time_intersection(alpha: f64, r2: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Config(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(r2 > 0.0 && r2.is_finite()) {
        return Err(Error::Config(format!(
            "residue modulus must be positive, got {r2}"
        )));
    }
    let (tau_p, f_p) = intersection_maximum(alpha);
    if (r2 - f_p).abs() <= TANGENCY_TOL * f_p {
        return Ok(vec![tau_p]);
    }
    if r2 > f_p {
        return Ok(Vec::new());
    }
    let g = |tau: f64| intersection_function(alpha, tau) - r2;
    let mut roots = Vec::new();
    if r2 > 1.0 {
        roots.push(bisect(g, 0.0, tau_p));
    } else if r2 == 1.0 {
        roots.push(0.0);
    }
    roots.push(bisect(g, tau_p, alpha));
    Ok(roots)
}

/// τ_cs = 4πx_d: the end of the first oscillation (n = 1).
pub fn critical_time_first_oscillation(x_d: f64) -> f64 {
    4.0 * PI * x_d
}

/// Variance estimate τ^G = ω_d²/⟨(ΔH)²⟩ = α² and n^G = τ^G/(4πx_d).
pub fn variance_critical_time(variance: f64, omega_d: f64, sigma_d: f64) -> Result<(f64, f64)> {
    if !(variance > 0.0) {
        return Err(Error::NegativeVariance(variance));
    }
    let tau = omega_d * omega_d / variance;
    let x = omega_d / (2.0 * sigma_d);
    Ok((tau, tau / (4.0 * PI * x)))
}

/// C(x_d, ν), fixing A_ne/A_e = e^{2πx_d n} e^{2πin} / (C n^{ν+1}) for n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionConstant {
    pub c: Complex64,
}

impl TransitionConstant {
    pub fn modulus(&self) -> f64 {
        self.c.norm()
    }

    pub fn arg(&self) -> f64 {
        self.c.arg()
    }
}

/// C = (2π)^{ν+2} e^{iπν/2} R(z_d) / (g(0) Γ(ν+1) Re(γ_d/ξ_d^{ν+1})).
pub fn transition_constant_formula(
    nu: f64,
    xi: Complex64,
    residue: Complex64,
    gamma: Complex64,
    g0: f64,
) -> Result<TransitionConstant> {
    let denom = g0 * gamma_real(nu + 1.0)? * (gamma / xi.powf(nu + 1.0)).re;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let phase = Complex64::from_polar(1.0, 0.5 * PI * nu);
    Ok(TransitionConstant {
        c: (2.0 * PI).powf(nu + 2.0) * phase * residue / denom,
    })
}

/// C for the dominant pole of a density. With several poles the threshold
/// coefficient β₀ collects all of them.
pub fn transition_constant(dos: &DensityOfStates) -> Result<TransitionConstant> {
    let nu = dos.nu();
    let d = dos.dominant();
    let denom = dos.beta0() * d.sigma.powf(nu + 1.0) * gamma_real(nu + 1.0)?;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let phase = Complex64::from_polar(1.0, 0.5 * PI * nu);
    Ok(TransitionConstant {
        c: (2.0 * PI).powf(nu + 2.0) * phase * dos.residue(dos.dominant_index()) / denom,
    })
}

/// η(n) = |A_e/A_ne| = |C| n^{ν+1} e^{−2πx_d n}.
pub fn eta_ratio(n: f64, c: &TransitionConstant, x_d: f64, nu: f64) -> f64 {
    log_eta(n, c, x_d, nu).exp()
}

fn log_eta(n: f64, c: &TransitionConstant, x_d: f64, nu: f64) -> f64 {
    c.modulus().ln() + (nu + 1.0) * n.ln() - 2.0 * PI * x_d * n
}

/// m(n) = 2/(η + 1/η), the envelope of the modulating function.
pub fn modulation_envelope(n: f64, c: &TransitionConstant, x_d: f64, nu: f64) -> f64 {
    let l = log_eta(n, c, x_d, nu);
    1.0 / l.cosh()
}

/// I(n) = 1 + m(n) cos(2πn − Arg C), with P = (P_e + P_ne) I.
pub fn modulating_i(n: f64, c: &TransitionConstant, x_d: f64, nu: f64) -> f64 {
    1.0 + modulation_envelope(n, c, x_d, nu) * (2.0 * PI * n - c.arg()).cos()
}

/// n at which η peaks and m(n) has its minimum: (ν+1)/(2πx_d).
pub fn m_minimum(x_d: f64, nu: f64) -> f64 {
    (nu + 1.0) / (2.0 * PI * x_d)
}

/// Both roots of n^{2ν+2} e^{−4πx_d n} = |C|^{−2}; the larger one is n_cl.
pub fn n_cl_solve(c: &TransitionConstant, x_d: f64, nu: f64) -> Result<(f64, f64)> {
    let h = |n: f64| log_eta(n, c, x_d, nu);
    let peak = m_minimum(x_d, nu);
    if h(peak) <= 0.0 {
        return Err(Error::NoIntersection(format!(
            "|C| n^(nu+1) e^(-2 pi x n) stays below 1 (peak value {:e})",
            h(peak).exp()
        )));
    }
    let mut lo = peak;
    while h(lo) > 0.0 {
        lo *= 0.5;
    }
    let mut hi = 2.0 * peak;
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    Ok((bisect(h, lo, peak), bisect(h, peak, hi)))
}

/// A region of the decay law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    SmallTime,
    Intermediate,
    Transition,
    Large,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::SmallTime => "small_time",
            Region::Intermediate => "intermediate",
            Region::Transition => "transition",
            Region::Large => "large",
        }
    }
}

/// Candidate critical times and region limits for one density.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RegionReport {
    pub x_d: f64,
    pub nu: f64,
    pub variance: f64,
    pub alpha: f64,
    /// |R̄(z_d)|² of the density as supplied, before normalisation.
    pub residue_sq: f64,
    pub tau_cs_oscillation: f64,
    pub tau_cs_intersection: Vec<f64>,
    pub tau_cs_variance: f64,
    pub n_cs_variance: f64,
    pub c_modulus: f64,
    pub c_arg: f64,
    pub n_small: f64,
    pub n_cl: f64,
    pub n_min_m: f64,
    /// Intermediate, transition and large-time intervals in n; the last is open.
    pub intervals: [(f64, Option<f64>); 3],
}

pub fn region_boundaries(dos: &DensityOfStates) -> Result<RegionReport> {
    let d = dos.dominant();
    let x_d = d.x();
    let nu = dos.nu();
    let var = variance(dos)?;
    if !(var > 0.0) {
        return Err(Error::NegativeVariance(var));
    }
    let alpha = d.omega / var.sqrt();
    let residue_sq = (2.0 * PI * dos.raw_residue(dos.dominant_index())).norm_sqr();
    let (tau_g, n_g) = variance_critical_time(var, d.omega, d.sigma)?;
    let c = transition_constant(dos)?;
    let (n_small, n_cl) = n_cl_solve(&c, x_d, nu)?;
    let n_min = m_minimum(x_d, nu);
    let end = 2.0 * n_cl - n_min;
    Ok(RegionReport {
        x_d,
        nu,
        variance: var,
        alpha,
        residue_sq,
        tau_cs_oscillation: critical_time_first_oscillation(x_d),
        tau_cs_intersection: critical_time_intersection(alpha, residue_sq)?,
        tau_cs_variance: tau_g,
        n_cs_variance: n_g,
        c_modulus: c.modulus(),
        c_arg: c.arg(),
        n_small,
        n_cl,
        n_min_m: n_min,
        intervals: [(1.0, Some(n_min)), (n_min, Some(end)), (end, None)],
    })
}

/// N(n) of the small-time ratio A_ne/A_e ≈ e^{2πin} N(n), for narrow
/// resonances and 0 < n < 1:
///
/// N(n) = (1/2πi) ∫₀^∞ g(−iyσ_d)/g(z_d) (−iy)^ν e^{−2πny}
///        [e^{−iνx}/(y − ie^{ix}) − e^{iνx}/(y − ie^{−ix})] dy.
pub fn small_time_n_integral(dos: &DensityOfStates, n: f64) -> Result<Complex64> {
    if !(n > 0.0) {
        return Err(Error::NotApplicable("small-time integral at n <= 0".into()));
    }
    let d = dos.dominant();
    let x = d.x();
    let nu = dos.nu();
    let ff = dos.form_factor();
    let gd = ff.eval(d.z());
    let y_max = (32.3 + nu * (1.0 + 1.0 / n).ln()) / (2.0 * PI * n);
    let e_minus = Complex64::from_polar(1.0, -nu * x);
    let e_plus = Complex64::from_polar(1.0, nu * x);
    let p1 = I * Complex64::from_polar(1.0, x);
    let p2 = I * Complex64::from_polar(1.0, -x);
    let mut pts = Vec::new();
    let mut y = 1e-10 * y_max.min(1.0);
    while y < y_max {
        pts.push(y);
        y *= 8.0;
    }
    let mut pts = finish_points(pts, 0.0, y_max);
    if let crate::dos::FormFactor::Exponential { b } = ff {
        pts = refine(&pts, PI / (b * d.sigma));
    }
    let r = integrate_points(
        |y| {
            let g = ff.eval(Complex64::new(0.0, -y * d.sigma)) / gd;
            let w = Complex64::new(0.0, -y);
            let pow = (w.ln() * nu).exp();
            g * pow * (-2.0 * PI * n * y).exp() * (e_minus / (y - p1) - e_plus / (y - p2))
        },
        &pts,
        &QuadOptions::tol(1e-14, 1e-11),
    )?;
    Ok(r.value / (2.0 * PI * I))
}

/// Region formulas for one density with a dominant narrow pole.
#[derive(Debug, Clone)]
pub struct PiecewiseModel {
    dos: DensityOfStates,
    pub report: RegionReport,
    c: TransitionConstant,
    /// 4π²|R(z_d)|² of the normalised density.
    pe0: f64,
}

impl PiecewiseModel {
    pub fn new(dos: &DensityOfStates) -> Result<Self> {
        let report = region_boundaries(dos)?;
        let c = transition_constant(dos)?;
        let pe0 = (2.0 * PI * dos.residue(dos.dominant_index())).norm_sqr();
        Ok(Self {
            dos: dos.clone(),
            report,
            c,
            pe0,
        })
    }

    pub fn region(&self, n: f64) -> Region {
        let [_, (lo, Some(hi)), _] = self.report.intervals else {
            unreachable!()
        };
        if n < 1.0 {
            Region::SmallTime
        } else if n < lo {
            Region::Intermediate
        } else if n < hi {
            Region::Transition
        } else {
            Region::Large
        }
    }

    fn x(&self) -> f64 {
        self.report.x_d
    }

    fn nu(&self) -> f64 {
        self.report.nu
    }

    /// 4π²|R|² e^{−4πx_d n}
    pub fn exponential(&self, n: f64) -> f64 {
        self.pe0 * (-4.0 * PI * self.x() * n).exp()
    }

    /// 4π²|R/C|² / n^{2ν+2}
    pub fn nonexponential(&self, n: f64) -> f64 {
        self.pe0 / (self.c.modulus().powi(2) * n.powf(2.0 * self.nu() + 2.0))
    }

    fn phase(&self, n: f64) -> f64 {
        (2.0 * PI * n - self.c.arg()).cos()
    }

    /// Small-time law 4π²|R|² e^{−4πx_d n} |1 + e^{2πin} N(n)|².
    pub fn small_time(&self, n: f64) -> Result<f64> {
        let nn = small_time_n_integral(&self.dos, n)?;
        Ok(self.exponential(n) * (1.0 + Complex64::from_polar(1.0, 2.0 * PI * n) * nn).norm_sqr())
    }

    /// P_e [1 + (2/η) cos(2πn − Arg C)]
    pub fn intermediate(&self, n: f64) -> f64 {
        let eta = eta_ratio(n, &self.c, self.x(), self.nu());
        self.exponential(n) * (1.0 + 2.0 / eta * self.phase(n))
    }

    /// I(n) (P_e + P_ne)
    pub fn transition(&self, n: f64) -> f64 {
        modulating_i(n, &self.c, self.x(), self.nu())
            * (self.exponential(n) + self.nonexponential(n))
    }

    /// P_ne [1 + 2η cos(2πn − Arg C)]
    pub fn large(&self, n: f64) -> f64 {
        let eta = eta_ratio(n, &self.c, self.x(), self.nu());
        self.nonexponential(n) * (1.0 + 2.0 * eta * self.phase(n))
    }

    /// P(n) from the formula of the region containing n.
    pub fn probability(&self, n: f64) -> Result<(Region, f64)> {
        let region = self.region(n);
        let p = match region {
            Region::SmallTime => self.small_time(n)?,
            Region::Intermediate => self.intermediate(n),
            Region::Transition => self.transition(n),
            Region::Large => self.large(n),
        };
        Ok((region, p))
    }
}

/// Exponential part of P for several poles, relative to the dominant pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleModulation {
    /// Complete double sum over pole pairs divided by |R̄_d|² e^{−τ}.
    pub full: f64,
    /// 1 + 2 Σ_{s≠d} Re[(R̄_s/R̄_d) e^{−i(σ_s−σ_d)τ/ω_d}] e^{−(ω_s/ω_d−1)τ/2}.
    pub dominant_terms: f64,
    /// The same keeping only the next pole d+1.
    pub nearest: f64,
    /// (σ_{d+1} − σ_d)/ω_d
    pub frequency: f64,
    /// (ω_{d+1}/ω_d − 1)/2 per lifetime
    pub damping: f64,
}

/// Poles ordered by width, the dominant pole first.
fn width_order(dos: &DensityOfStates) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dos.poles().len()).collect();
    let d = dos.dominant();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (dos.poles()[a], dos.poles()[b]);
        pa.omega.total_cmp(&pb.omega).then(
            (pa.sigma - d.sigma)
                .abs()
                .total_cmp(&(pb.sigma - d.sigma).abs()),
        )
    });
    order
}

/// P_e at τ from the pairwise sum Σ_s |R̄_s|² e^{−ω_s t}[1 + 2Σ_{s'>s} Re(...)].
pub fn exponential_probability_sum(dos: &DensityOfStates, tau: f64) -> f64 {
    let t = tau / dos.dominant().omega;
    let order = width_order(dos);
    let rbar = |s: usize| -2.0 * PI * I * dos.residue(s);
    let mut total = 0.0;
    for (k, &s) in order.iter().enumerate() {
        let ps = dos.poles()[s];
        let mut inner = 1.0;
        for &q in &order[k + 1..] {
            let pq = dos.poles()[q];
            let ratio = rbar(q) / rbar(s) * Complex64::from_polar(1.0, -(pq.sigma - ps.sigma) * t);
            inner += 2.0 * ratio.re * (-(pq.omega - ps.omega) * t / 2.0).exp();
        }
        total += rbar(s).norm_sqr() * (-ps.omega * t).exp() * inner;
    }
    total
}

pub fn multi_pole_modulation(dos: &DensityOfStates, tau: f64) -> Result<PoleModulation> {
    if dos.poles().len() < 2 {
        return Err(Error::SinglePole);
    }
    let order = width_order(dos);
    let d = order[0];
    let pd: Pole = dos.poles()[d];
    let term = |s: usize| {
        let p = dos.poles()[s];
        let ratio = dos.residue(s) / dos.residue(d)
            * Complex64::from_polar(1.0, -(p.sigma - pd.sigma) * tau / pd.omega);
        2.0 * ratio.re * (-(p.omega / pd.omega - 1.0) * tau / 2.0).exp()
    };
    let rd = (2.0 * PI * dos.residue(d)).norm_sqr();
    let next = dos.poles()[order[1]];
    Ok(PoleModulation {
        full: exponential_probability_sum(dos, tau) / (rd * (-tau).exp()),
        dominant_terms: 1.0 + order[1..].iter().map(|&s| term(s)).sum::<f64>(),
        nearest: 1.0 + term(order[1]),
        frequency: (next.sigma - pd.sigma) / pd.omega,
        damping: (next.omega / pd.omega - 1.0) / 2.0,
    })
}

/// The x_d values of the published comparison of critical times.
pub const TABLE1_X: [f64; 12] = [
    1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1,
];

/// One row of the critical-time comparison.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Table1Row {
    pub x_d: f64,
    pub tau_g: f64,
    /// Largest root of f(τ) = |R̄|², if any.
    pub tau_cs: Option<f64>,
    pub tau_osc: f64,
    pub n_g: f64,
    pub n_cs: Option<f64>,
    pub roots: Vec<f64>,
}

/// Critical times for a narrow resonance with the exponential form factor.
/// |R̄(z_d)|² is taken from the unnormalised narrow density, π² e^{−2b_s}.
pub fn table1(b_s: f64, nu: f64, x_grid: &[f64]) -> Result<Vec<Table1Row>> {
    let opts = BuildOptions {
        check_positivity: false,
        check_normalization: false,
    };
    par_map(x_grid, |&x| -> Result<Table1Row> {
        let dos = DimensionlessResonance::new(x, nu, b_s).density_with(opts)?;
        let var = variance(&dos)?;
        let omega = dos.dominant().omega;
        let (tau_g, n_g) = variance_critical_time(var, omega, 1.0)?;
        let alpha = omega / var.sqrt();
        let r2 = (2.0 * PI * dos.raw_residue(0)).norm_sqr();
        let roots = critical_time_intersection(alpha, r2)?;
        let tau_cs = roots.last().copied();
        let tau_osc = critical_time_first_oscillation(x);
        Ok(Table1Row {
            x_d: x,
            tau_g,
            tau_cs,
            tau_osc,
            n_g,
            n_cs: tau_cs.map(|t| t / tau_osc),
            roots,
        })
    })
    .into_iter()
    .collect()
}

/// ⁸Be(0⁺) → αα: Re z = 92 keV, Im z = 2.8 eV.
pub const BE8_RE_KEV: f64 = 92.0;
pub const BE8_IM_EV: f64 = 2.8;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Be8Report {
    pub re_kev: f64,
    pub im_ev: f64,
    pub nu: f64,
    pub b_s: f64,
    pub x_s: f64,
    /// b = b_s / Re z in MeV⁻¹
    pub b_per_mev: f64,
    /// Oscillation period 4πx_s in mean lifetimes 1/ω.
    pub period_lifetimes: f64,
    pub variance: f64,
    pub negative_variance: Vec<(f64, f64)>,
}

/// Kinematics of the ⁸Be preset and its negative-variance window in b_s.
pub fn be8(b_s: f64, nu: f64) -> Result<Be8Report> {
    let pole = Pole::from_kev_ev(BE8_RE_KEV, BE8_IM_EV)?;
    let x = pole.x();
    let res = DimensionlessResonance::new(x, nu, b_s);
    let dos = res.density_with(BuildOptions::unchecked())?;
    let scan = be8_variance_scan(x, nu)?;
    Ok(Be8Report {
        re_kev: BE8_RE_KEV,
        im_ev: BE8_IM_EV,
        nu,
        b_s,
        x_s: x,
        b_per_mev: b_s / (BE8_RE_KEV * 1e-3),
        period_lifetimes: critical_time_first_oscillation(x),
        variance: variance(&dos)?,
        negative_variance: scan.negative_intervals,
    })
}

fn be8_variance_scan(x: f64, nu: f64) -> Result<VarianceScan> {
    let grid: Vec<f64> = (0..=60)
        .map(|k| 10f64.powf(-14.0 + 0.25 * k as f64))
        .collect();
    variance_sign_scan(x, nu, &grid)
}
