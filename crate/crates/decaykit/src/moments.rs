//! Energy moments ⟨Hⁿ⟩, the energy variance, the Taylor coefficients of the
//! survival probability and the variance sign scan.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dos::{build_dos_with, BuildOptions, DensityOfStates, FormFactor, Pole, PoleSet};
use crate::error::{Error, Result};
use crate::quad::QuadOptions;
use crate::special::{complex_power, gamma_real, sin_pi};

/// Highest moment order evaluated in closed form. Beyond this the alternating
/// pole sums lose too many digits in double precision.
pub const MAX_ORDER: u32 = 8;

fn check_order(n: u32) -> Result<()> {
    if n > MAX_ORDER {
        Err(Error::OrderTooHigh {
            order: n,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// ⟨Hⁿ⟩ of the normalised density.
///
/// Exponential form factor: (−1)ⁿ⁺¹ Γ(1+ν+n) Re Σ e^{iνπ} z_sⁿ γ_s e^{−bz_s} Γ(−ν−n, −bz_s).
/// Constant form factor: −π/sin(πν) Σ_{±s} z_sⁿ R_s e^{±iπν}, which exists only
/// while Re Σ z_s^{p−ν} R_s = 0 holds for every p ≤ n.
pub fn moment(dos: &DensityOfStates, n: u32) -> Result<f64> {
    check_order(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    match dos.form_factor() {
        FormFactor::Exponential { .. } => {
            let mut sum = 0.0;
            for s in 0..dos.poles().len() {
                sum += (dos.coeff(s) * dos.pole_integral(s, n)?).re;
            }
            Ok(sum)
        }
        FormFactor::Constant => constant_ff_moment(dos, n),
        FormFactor::Gaussian { .. } => Err(Error::GaussianRejected),
    }
}

fn constant_ff_moment(dos: &DensityOfStates, n: u32) -> Result<f64> {
    let nu = dos.nu();
    let scale: f64 = dos
        .poles()
        .iter()
        .enumerate()
        .map(|(s, p)| dos.residue(s).norm() * p.z().norm().powi(n as i32))
        .sum();
    for p in 0..=n {
        let mut cond = 0.0;
        for (s, pole) in dos.poles().iter().enumerate() {
            cond += (complex_power(pole.z(), p as f64 - nu)? * dos.residue(s)).re;
        }
        if cond.abs() > 1e-9 * scale.max(1.0) {
            return Err(Error::MomentDivergent(n));
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (s, pole) in dos.poles().iter().enumerate() {
        sum += pole.z().powu(n) * dos.residue(s) * Complex64::from_polar(1.0, PI * nu);
    }
    Ok(-PI / sin_pi(nu) * 2.0 * sum.re)
}

/// ⟨Hⁿ⟩ by direct quadrature of Eⁿ ρ(E).
pub fn moment_quadrature(dos: &DensityOfStates, n: u32) -> Result<f64> {
    check_order(n)?;
    let e_max = dos.energy_cutoff().ok_or(Error::MomentDivergent(n))?;
    let r = dos.integrate_real_axis(e_max, None, &QuadOptions::tol(0.0, 1e-11), |loc| {
        Complex64::new(loc.energy.powi(n as i32) * dos.density_loc(loc), 0.0)
    })?;
    if !r.value.re.is_finite() {
        return Err(Error::MomentDivergent(n));
    }
    Ok(r.value.re)
}

/// Mean energy and variance ⟨H²⟩ − ⟨H⟩².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySpread {
    pub mean: f64,
    pub variance: f64,
}

/// Mean and variance computed about c = σ_d, which avoids the catastrophic
/// cancellation of ⟨H²⟩ − ⟨H⟩² when the variance is O(x_d)·σ_d².
///
/// With d = z_s − c and G_j = ∫ E^{ν+j} g dE:
/// ∫ Eᵛ g (E−c)/(z_s−E) = −G₀ + d I₀,
/// ∫ Eᵛ g (E−c)²/(z_s−E) = −(G₁ − z_s G₀) − 2d G₀ + d² I₀.
pub fn energy_spread(dos: &DensityOfStates) -> Result<EnergySpread> {
    match dos.form_factor() {
        FormFactor::Exponential { b } => {
            let nu = dos.nu();
            let c = dos.dominant().sigma;
            let g0 = gamma_real(nu + 1.0)? / b.powf(nu + 1.0);
            let g1 = gamma_real(nu + 2.0)? / b.powf(nu + 2.0);
            let (mut r0, mut r1, mut r2) = (0.0, 0.0, 0.0);
            for (s, pole) in dos.poles().iter().enumerate() {
                let z = pole.z();
                let d = Complex64::new(pole.sigma - c, -0.5 * pole.omega);
                let i0 = dos.pole_integral(s, 0)?;
                let k = dos.coeff(s);
                r0 += (k * i0).re;
                r1 += (k * (d * i0 - g0)).re;
                r2 += (k * (-(g1 - z * g0) - 2.0 * d * g0 + d * d * i0)).re;
            }
            let shift = r1 / r0;
            Ok(EnergySpread {
                mean: c + shift,
                variance: r2 / r0 - shift * shift,
            })
        }
        _ => {
            let m1 = moment(dos, 1)?;
            let m2 = moment(dos, 2)?;
            Ok(EnergySpread {
                mean: m1,
                variance: m2 - m1 * m1,
            })
        }
    }
}

/// Energy variance of the normalised density.
pub fn variance(dos: &DensityOfStates) -> Result<f64> {
    Ok(energy_spread(dos)?.variance)
}

/// Moments ⟨H⁰⟩ … ⟨Hⁿ⟩ with the variance.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MomentTable {
    pub moments: Vec<f64>,
    pub variance: f64,
}

pub fn moment_table(dos: &DensityOfStates, max_order: u32) -> Result<MomentTable> {
    check_order(max_order)?;
    let moments = (0..=max_order)
        .map(|n| moment(dos, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentTable {
        moments,
        variance: variance(dos)?,
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// p_n = Σ_m (−1)ᵐ C(n,m) ⟨Hᵐ⟩⟨Hⁿ⁻ᵐ⟩, so that P(t) = Σ iⁿ p_n tⁿ/n!.
/// Odd orders vanish identically.
pub fn taylor_coefficients(moments: &[f64]) -> Vec<f64> {
    let n_max = moments.len() as u32 - 1;
    (0..=n_max)
        .map(|n| {
            // pair m with n−m so odd orders cancel exactly
            let mut sum = 0.0;
            for m in 0..=n {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * binomial(n, m) * moments[m as usize] * moments[(n - m) as usize];
            }
            sum
        })
        .collect()
}

/// Taylor coefficients of t^k in P_e, P_ne and P_i.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedTaylor {
    pub exponential: Vec<f64>,
    pub nonexponential: Vec<f64>,
    pub interference: Vec<f64>,
}

/// Expands P_e = |A_e|², P_ne = |A_ne|² and P_i = 2Re(A_e A_ne*) in powers of t
/// using B_n = −2πi Σ z_sⁿ R_s and ⟨Hⁿ⟩. Individually each has a linear term;
/// their sum does not.
pub fn decomposed_taylor(dos: &DensityOfStates, max_order: u32) -> Result<DecomposedTaylor> {
    check_order(max_order)?;
    let m: Vec<f64> = (0..=max_order)
        .map(|n| moment(dos, n))
        .collect::<Result<_>>()?;
    let b: Vec<Complex64> = (0..=max_order)
        .map(|n| {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, p) in dos.poles().iter().enumerate() {
                s += p.z().powu(n) * dos.residue(k);
            }
            Complex64::new(0.0, -2.0 * PI) * s
        })
        .collect();
    let d: Vec<Complex64> = m.iter().zip(&b).map(|(m, b)| m - b).collect();
    let mut out = DecomposedTaylor {
        exponential: Vec::new(),
        nonexponential: Vec::new(),
        interference: Vec::new(),
    };
    let mut fact = 1.0;
    for n in 0..=max_order {
        if n > 0 {
            fact *= n as f64;
        }
        let i_n = Complex64::new(0.0, 1.0).powu(n) / fact;
        let (mut e, mut ne, mut it) = (
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
        );
        for k in 0..=n {
            let c = if k % 2 == 0 { 1.0 } else { -1.0 } * binomial(n, k);
            let (k, j) = (k as usize, (n - k) as usize);
            e += c * b[k] * b[j].conj();
            ne += c * d[k] * d[j].conj();
            it += c * b[k] * d[j].conj();
        }
        out.exponential.push((i_n * e).re);
        out.nonexponential.push((i_n * ne).re);
        out.interference.push(2.0 * (i_n * it).re);
    }
    Ok(out)
}

/// Variance sign across a grid of b_s values for one narrow resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceScan {
    /// (b_s, variance in units of σ_d²)
    pub samples: Vec<(f64, f64)>,
    /// Maximal b_s intervals with negative variance, ends refined by bisection.
    pub negative_intervals: Vec<(f64, f64)>,
}

/// Variance of the narrow single-pole density at a given b_s (σ_d = 1).
/// Skips positivity and quadrature checks: the scan deliberately visits
/// unphysical densities.
pub fn narrow_variance(x_d: f64, nu: f64, b_s: f64) -> Result<f64> {
    let set = PoleSet::narrow(vec![Pole::dimensionless(x_d)?])?;
    let opts = BuildOptions {
        check_positivity: false,
        check_normalization: false,
    };
    let dos = build_dos_with(&set, nu, FormFactor::Exponential { b: b_s }, opts)?;
    variance(&dos)
}

/// Samples the variance sign over `b_grid` (ascending) and bisects every sign
/// change in log b_s to three significant figures.
pub fn variance_sign_scan(x_d: f64, nu: f64, b_grid: &[f64]) -> Result<VarianceScan> {
    let samples = b_grid
        .iter()
        .map(|&b| Ok((b, narrow_variance(x_d, nu, b)?)))
        .collect::<Result<Vec<_>>>()?;
    let refine = |lo: f64, hi: f64| -> Result<f64> {
        let neg_lo = narrow_variance(x_d, nu, lo)? < 0.0;
        let (mut a, mut b) = (lo.ln(), hi.ln());
        while (b - a) > 1e-4 {
            let mid = 0.5 * (a + b);
            if (narrow_variance(x_d, nu, mid.exp())? < 0.0) == neg_lo {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(round_sig(0.5 * (a + b), 3))
    };
    let mut intervals = Vec::new();
    let mut start: Option<f64> = None;
    for (k, &(b, v)) in samples.iter().enumerate() {
        let neg = v < 0.0;
        if k == 0 {
            if neg {
                start = Some(b);
            }
            continue;
        }
        let prev = samples[k - 1];
        let was_neg = prev.1 < 0.0;
        if neg && !was_neg {
            start = Some(refine(prev.0, b)?);
        } else if !neg && was_neg {
            let end = refine(prev.0, b)?;
            intervals.push((start.take().unwrap_or(prev.0), end));
        }
    }
    if let Some(s) = start {
        intervals.push((s, samples.last().map(|p| p.0).unwrap_or(s)));
    }
    Ok(VarianceScan {
        samples,
        negative_intervals: intervals,
    })
}

fn round_sig(log_b: f64, digits: i32) -> f64 {
    let v = log_b.exp();
    let p = 10f64.powi(digits - 1 - v.log10().floor() as i32);
    (v * p).round() / p
}

/// Quadratic small-time law P(t) ≈ 1 − ⟨(ΔH)²⟩ t².
pub fn small_time_p(variance: f64, t: f64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::NegativeVariance(variance));
    }
    Ok(1.0 - variance * t * t)
}
