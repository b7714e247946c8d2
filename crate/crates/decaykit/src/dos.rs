//! Density of states built from a set of resonance poles.
//!
//! ρ(E) = Eᵛ g(E) Re Σ_{s>0} γ_s / (z_sᵛ (z_s − E)) / N
//!
//! with poles z_s = σ_s − iω_s/2 in the fourth quadrant (their conjugates are
//! implicit), γ_s = −2R_s/g(z_s) and N the normalisation. In narrow-resonance
//! mode every γ_s is −i. Energies are in any fixed unit; the helpers built from
//! dimensionless parameters use σ_d = 1.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{cluster_points, finish_points, integrate_points, QuadOptions, QuadResult};
use crate::special::{complex_power, gamma_real, upper_gamma_scaled_sheet};

/// Largest x_s = ω_s/(2σ_s) accepted in narrow-resonance mode.
pub const NARROW_LIMIT: f64 = 0.15;
/// Number of log-spaced positivity probes over [1e-6, 1e3]·σ_d.
pub const POSITIVITY_POINTS: usize = 10_000;
/// Allowed negative dip relative to the peak density. The narrow-mode density
/// has an O(x_s) negative tail above E ≈ σ(1+ν)/ν, so exact positivity is not
/// attainable; this only rejects grossly wrong residues.
pub const POSITIVITY_REL_TOL: f64 = 1e-2;
/// Agreement required between closed-form and quadrature normalisation.
pub const NORMALIZATION_REL_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A resonance pole z = σ − iω/2.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Pole {
    pub sigma: f64,
    pub omega: f64,
}

impl Pole {
    pub fn new(sigma: f64, omega: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidPole(format!(
                "Re z must be positive, got {sigma}"
            )));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidPole(format!(
                "width must be positive, got {omega}"
            )));
        }
        Ok(Self { sigma, omega })
    }

    /// Pole 1 − i x in units of its own real part.
    pub fn dimensionless(x: f64) -> Result<Self> {
        Self::new(1.0, 2.0 * x)
    }

    /// Pole from Re z in keV and |Im z| in eV, returned in keV.
    pub fn from_kev_ev(re_kev: f64, im_ev: f64) -> Result<Self> {
        Self::new(re_kev, 2.0 * im_ev * 1e-3)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.sigma, -0.5 * self.omega)
    }

    /// x = |Im z| / Re z.
    pub fn x(&self) -> f64 {
        0.5 * self.omega / self.sigma
    }
}

/// How the residue weights of the poles are specified.
#[derive(Debug, Clone, PartialEq)]
pub enum Residues {
    /// γ_s = −i for every pole.
    Narrow,
    /// Residues R(z_s) of the unnormalised density, one per pole.
    Explicit(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    poles: Vec<Pole>,
    residues: Residues,
}

impl PoleSet {
    pub fn new(poles: Vec<Pole>, residues: Residues) -> Result<Self> {
        if poles.is_empty() {
            return Err(Error::InvalidPole("empty pole set".into()));
        }
        if let Residues::Explicit(r) = &residues {
            if r.len() != poles.len() {
                return Err(Error::ResidueCountMismatch {
                    residues: r.len(),
                    poles: poles.len(),
                });
            }
        }
        Ok(Self { poles, residues })
    }

    pub fn narrow(poles: Vec<Pole>) -> Result<Self> {
        Self::new(poles, Residues::Narrow)
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn residues(&self) -> &Residues {
        &self.residues
    }

    /// Index of the narrowest pole, which dominates the exponential regime.
    pub fn dominant(&self) -> usize {
        let mut d = 0;
        for (i, p) in self.poles.iter().enumerate() {
            if p.omega < self.poles[d].omega {
                d = i;
            }
        }
        d
    }
}

/// Form factor g(E), analytic in the fourth quadrant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FormFactor {
    /// g = e^{−bE}.
    Exponential { b: f64 },
    /// g = 1.
    Constant,
    /// g = e^{−aE²}; grows like e^{ay²} on the negative imaginary axis and is rejected.
    Gaussian { a: f64 },
}

impl FormFactor {
    pub fn eval(&self, e: Complex64) -> Complex64 {
        match *self {
            FormFactor::Exponential { b } => (-b * e).exp(),
            FormFactor::Constant => Complex64::new(1.0, 0.0),
            FormFactor::Gaussian { a } => (-a * e * e).exp(),
        }
    }

    pub fn eval_real(&self, e: f64) -> f64 {
        match *self {
            FormFactor::Exponential { b } => (-b * e).exp(),
            FormFactor::Constant => 1.0,
            FormFactor::Gaussian { a } => (-a * e * e).exp(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FormFactor::Exponential { .. } => "exponential",
            FormFactor::Constant => "constant",
            FormFactor::Gaussian { .. } => "gaussian",
        }
    }

    /// Checks that |g(−iy)| grows at most exponentially, the condition for
    /// closing the contour in the fourth quadrant.
    pub fn is_exponential_order(&self) -> bool {
        // growth rate ln|g(−iy)|/y must stay bounded as y grows
        let rate = |y: f64| self.eval(Complex64::new(0.0, -y)).norm().ln() / y;
        let (r7, r8) = (rate(1e7), rate(1e8));
        r8.is_finite() && !(r8 > 5.0 * r7.abs() && r8 > 1e-12)
    }
}

/// Single narrow resonance in dimensionless form: x_d = |Im z_d|/Re z_d,
/// b_s = b·Re z_d, threshold exponent ν.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DimensionlessResonance {
    pub x_d: f64,
    pub nu: f64,
    pub b_s: f64,
}

impl DimensionlessResonance {
    pub fn new(x_d: f64, nu: f64, b_s: f64) -> Self {
        Self { x_d, nu, b_s }
    }

    /// ξ_d = 1 − i x_d.
    pub fn xi(&self) -> Complex64 {
        Complex64::new(1.0, -self.x_d)
    }

    /// Narrow-mode density with σ_d = 1.
    pub fn density(&self) -> Result<DensityOfStates> {
        self.density_with(BuildOptions::default())
    }

    pub fn density_with(&self, opts: BuildOptions) -> Result<DensityOfStates> {
        build_dos_with(
            &PoleSet::narrow(vec![Pole::dimensionless(self.x_d)?])?,
            self.nu,
            FormFactor::Exponential { b: self.b_s },
            opts,
        )
    }
}

/// Checks applied while building a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub check_positivity: bool,
    pub check_normalization: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            check_positivity: true,
            check_normalization: true,
        }
    }
}

impl BuildOptions {
    /// No positivity check, for deliberately unphysical densities such as the
    /// small-b_s regime where the variance turns negative.
    pub fn unchecked() -> Self {
        Self {
            check_positivity: false,
            check_normalization: true,
        }
    }
}

/// Normalised density of states.
#[derive(Debug, Clone)]
pub struct DensityOfStates {
    nu: f64,
    form_factor: FormFactor,
    poles: Vec<Pole>,
    narrow: bool,
    gamma: Vec<Complex64>,
    /// γ_s / z_sᵛ
    coeff: Vec<Complex64>,
    norm: f64,
    dominant: usize,
}

/// Normalisation computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationReport {
    pub closed_form: f64,
    pub quadrature: f64,
}

/// Builds and validates a density with the default checks.
pub fn build_dos(poles: &PoleSet, nu: f64, form_factor: FormFactor) -> Result<DensityOfStates> {
    build_dos_with(poles, nu, form_factor, BuildOptions::default())
}

pub fn build_dos_with(
    pole_set: &PoleSet,
    nu: f64,
    form_factor: FormFactor,
    opts: BuildOptions,
) -> Result<DensityOfStates> {
    match form_factor {
        FormFactor::Gaussian { .. } => {}
        FormFactor::Exponential { b } => {
            if !(nu > 0.0 && nu <= 1.0) {
                return Err(Error::NuOutOfRange {
                    nu,
                    form_factor: "exponential",
                });
            }
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Config(format!(
                    "form factor slope b must be positive, got {b}"
                )));
            }
        }
        FormFactor::Constant => {
            if !(nu > 0.0 && nu < 1.0) {
                return Err(Error::NuOutOfRange {
                    nu,
                    form_factor: "constant",
                });
            }
            if pole_set.poles.len() < 2 {
                return Err(Error::SingleResonanceConstantFF);
            }
        }
    }
    if !form_factor.is_exponential_order() {
        return Err(Error::GaussianRejected);
    }
    let poles = pole_set.poles.clone();
    let narrow = matches!(pole_set.residues, Residues::Narrow);
    let gamma: Vec<Complex64> = match &pole_set.residues {
        Residues::Narrow => {
            for p in &poles {
                if p.x() > NARROW_LIMIT {
                    return Err(Error::NarrowModeInvalid {
                        x: p.x(),
                        limit: NARROW_LIMIT,
                    });
                }
            }
            vec![-I; poles.len()]
        }
        Residues::Explicit(r) => poles
            .iter()
            .zip(r)
            .map(|(p, r)| -2.0 * r / form_factor.eval(p.z()))
            .collect(),
    };
    let coeff = poles
        .iter()
        .zip(&gamma)
        .map(|(p, g)| Ok(g / complex_power(p.z(), nu)?))
        .collect::<Result<Vec<_>>>()?;
    let mut dos = DensityOfStates {
        nu,
        form_factor,
        dominant: pole_set.dominant(),
        poles,
        narrow,
        gamma,
        coeff,
        norm: 1.0,
    };
    if form_factor == FormFactor::Constant {
        let (sum_rule, decay_rule) = dos.constant_ff_residuals();
        if sum_rule.abs() > 1e-10 || decay_rule.abs() > 1e-10 {
            return Err(Error::ConstantFFConditions {
                sum_rule,
                decay_rule,
            });
        }
    }
    let closed = dos.normalization_closed_form()?;
    if opts.check_normalization {
        let quad = dos.normalization_quadrature()?;
        if (closed - quad).abs() > NORMALIZATION_REL_TOL * closed.abs() {
            return Err(Error::NormalizationMismatch {
                closed,
                quadrature: quad,
            });
        }
    }
    if !(closed.is_finite() && closed != 0.0) {
        return Err(Error::NonfiniteResult("normalisation"));
    }
    dos.norm = closed;
    if opts.check_positivity {
        dos.check_positivity()?;
    }
    Ok(dos)
}

/// Normalisation of an already built density, computed in closed form and by quadrature.
pub fn normalize_dos(dos: &DensityOfStates) -> Result<NormalizationReport> {
    let report = NormalizationReport {
        closed_form: dos.normalization_closed_form()?,
        quadrature: dos.normalization_quadrature()?,
    };
    if (report.closed_form - report.quadrature).abs()
        > NORMALIZATION_REL_TOL * report.closed_form.abs()
    {
        return Err(Error::NormalizationMismatch {
            closed: report.closed_form,
            quadrature: report.quadrature,
        });
    }
    Ok(report)
}

/// A point on the real axis written as σ_anchor + offset, so the distance to
/// the anchor pole is exact even when its width is far below the spacing of
/// doubles near σ.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Loc {
    pub anchor: Option<usize>,
    pub offset: f64,
    pub energy: f64,
}

/// A quadrature panel group sharing one anchor.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub anchor: Option<usize>,
    pub base: f64,
    pub points: Vec<f64>,
}

impl DensityOfStates {
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn form_factor(&self) -> FormFactor {
        self.form_factor
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    pub fn is_narrow(&self) -> bool {
        self.narrow
    }

    pub fn dominant_index(&self) -> usize {
        self.dominant
    }

    pub fn dominant(&self) -> Pole {
        self.poles[self.dominant]
    }

    /// Normalisation N that divides the raw density.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    /// γ_s of the normalised density (γ_s/N).
    pub fn gamma(&self, s: usize) -> Complex64 {
        self.gamma[s] / self.norm
    }

    /// γ_s / z_sᵛ of the normalised density.
    pub(crate) fn coeff(&self, s: usize) -> Complex64 {
        self.coeff[s] / self.norm
    }

    /// Residue of the normalised density at z_s: −γ_s g(z_s)/(2N).
    pub fn residue(&self, s: usize) -> Complex64 {
        -0.5 * self.gamma[s] * self.form_factor.eval(self.poles[s].z()) / self.norm
    }

    /// Residue before normalisation, −γ_s g(z_s)/2.
    pub fn raw_residue(&self, s: usize) -> Complex64 {
        -0.5 * self.gamma[s] * self.form_factor.eval(self.poles[s].z())
    }

    /// ρ(E) for real E ≥ 0.
    pub fn density(&self, e: f64) -> f64 {
        self.density_loc(Loc {
            anchor: None,
            offset: e,
            energy: e,
        })
    }

    /// ρ(σ_s + u) evaluated with the distance to pole s taken exactly as u.
    pub fn density_near(&self, s: usize, u: f64) -> f64 {
        self.density_loc(Loc {
            anchor: Some(s),
            offset: u,
            energy: self.poles[s].sigma + u,
        })
    }

    pub(crate) fn density_loc(&self, loc: Loc) -> f64 {
        let e = loc.energy;
        if e <= 0.0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for (s, p) in self.poles.iter().enumerate() {
            let delta = if loc.anchor == Some(s) {
                -loc.offset
            } else {
                p.sigma - e
            };
            let h = 0.5 * p.omega;
            let c = self.coeff[s];
            // Re(c / (δ − ih))
            sum += (c.re * delta - c.im * h) / (delta * delta + h * h);
        }
        e.powf(self.nu) * self.form_factor.eval_real(e) * sum / self.norm
    }

    /// Analytic continuation ρ(z) = ½ zᵛ g(z) Σ_{±s} γ_s/(z_sᵛ (z_s − z)) / N.
    pub fn density_complex(&self, z: Complex64) -> Result<Complex64> {
        let zn = complex_power(z, self.nu)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (s, p) in self.poles.iter().enumerate() {
            let zs = p.z();
            let zc = zs.conj();
            sum += self.gamma[s] / (complex_power(zs, self.nu)? * (zs - z));
            sum += self.gamma[s].conj() / (complex_power(zc, self.nu)? * (zc - z));
        }
        Ok(0.5 * zn * self.form_factor.eval(z) * sum / self.norm)
    }

    /// Leading threshold coefficient β₀ in ρ(E) ≈ β₀ Eᵛ as E → 0.
    pub fn beta0(&self) -> f64 {
        let g0 = self.form_factor.eval_real(0.0);
        let sum: f64 = self
            .poles
            .iter()
            .zip(&self.coeff)
            .map(|(p, c)| (c / p.z()).re)
            .sum();
        g0 * sum / self.norm
    }

    /// Energy beyond which the density is negligible (exponential form factor).
    pub(crate) fn energy_cutoff(&self) -> Option<f64> {
        let smax = self.poles.iter().map(|p| p.sigma).fold(0.0, f64::max);
        match self.form_factor {
            FormFactor::Exponential { b } => {
                Some(2.0 * smax + (44.0 + 2.0 * (1.0 + 1.0 / (b * smax)).ln()) / b)
            }
            _ => None,
        }
    }

    /// Breakpoint layout of [0, e_max] in pole-local coordinates.
    pub(crate) fn layout(&self, e_max: f64) -> Vec<Layout> {
        let mut order: Vec<usize> = (0..self.poles.len()).collect();
        order.sort_by(|a, b| self.poles[*a].sigma.total_cmp(&self.poles[*b].sigma));
        // half-window of each pole
        let mut windows = Vec::new();
        for (k, &s) in order.iter().enumerate() {
            let p = self.poles[s];
            let mut h = 0.5 * p.sigma;
            if k > 0 {
                h = h.min(0.5 * (p.sigma - self.poles[order[k - 1]].sigma));
            }
            if k + 1 < order.len() {
                h = h.min(0.5 * (self.poles[order[k + 1]].sigma - p.sigma));
            }
            let lo = (p.sigma - h).max(0.0);
            let hi = (p.sigma + h).min(e_max);
            if hi > lo && h > 0.0 {
                windows.push((s, lo, hi));
            }
        }
        let mut out = Vec::new();
        let mut cursor = 0.0;
        let smin = self
            .poles
            .iter()
            .map(|p| p.sigma)
            .fold(f64::INFINITY, f64::min);
        for (s, lo, hi) in windows {
            if lo > cursor {
                out.push(self.free_layout(cursor, lo, smin));
            }
            let p = self.poles[s];
            let mut pts = Vec::new();
            cluster_points(0.0, 0.25 * p.omega, lo - p.sigma, hi - p.sigma, &mut pts);
            out.push(Layout {
                anchor: Some(s),
                base: p.sigma,
                points: finish_points(pts, lo - p.sigma, hi - p.sigma),
            });
            cursor = hi;
        }
        if e_max > cursor {
            out.push(self.free_layout(cursor, e_max, smin));
        }
        out
    }

    fn free_layout(&self, lo: f64, hi: f64, scale: f64) -> Layout {
        let mut pts = Vec::new();
        if lo == 0.0 {
            // threshold behaviour Eᵛ
            let mut e = 1e-8 * scale;
            while e < hi {
                pts.push(e);
                e *= 8.0;
            }
        } else {
            let mut d = 0.5 * lo;
            while lo + d < hi {
                pts.push(lo + d);
                d *= 2.0;
            }
        }
        Layout {
            anchor: None,
            base: 0.0,
            points: finish_points(pts, lo, hi),
        }
    }

    /// ∫₀^{e_max} f(loc) dE over the pole-local layout. `max_step` caps the
    /// initial panel width (used to resolve oscillatory kernels).
    pub(crate) fn integrate_real_axis<F: FnMut(Loc) -> Complex64>(
        &self,
        e_max: f64,
        max_step: Option<f64>,
        opts: &QuadOptions,
        mut f: F,
    ) -> Result<QuadResult> {
        let mut total = QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        };
        for lay in self.layout(e_max) {
            let pts = match max_step {
                Some(h) => refine(&lay.points, h),
                None => lay.points.clone(),
            };
            let anchor = lay.anchor;
            let base = lay.base;
            let r = integrate_points(
                |u| {
                    f(Loc {
                        anchor,
                        offset: u,
                        energy: base + u,
                    })
                },
                &pts,
                opts,
            )?;
            total.value += r.value;
            total.error += r.error;
            total.evaluations += r.evaluations;
        }
        Ok(total)
    }

    /// ∫ Eᵛ⁺ⁿ g(E) / (z_s − E) dE in closed form (exponential form factor).
    pub(crate) fn pole_integral(&self, s: usize, n: u32) -> Result<Complex64> {
        let b = match self.form_factor {
            FormFactor::Exponential { b } => b,
            _ => return Err(Error::NotApplicable("closed-form pole integral".into())),
        };
        let z = self.poles[s].z();
        let a = self.nu + n as f64;
        let w = -b * z;
        // (−z)^a = e^{iπa} z^a for z in the fourth quadrant
        let phase = Complex64::from_polar(1.0, PI * a);
        let s_val = upper_gamma_scaled_sheet(-a, w, 0)?;
        Ok(-gamma_real(a + 1.0)? * phase * complex_power(z, a)? * s_val)
    }

    /// N from the closed form (before any normalisation is applied).
    pub fn normalization_closed_form(&self) -> Result<f64> {
        match self.form_factor {
            FormFactor::Exponential { .. } => {
                let mut n = 0.0;
                for s in 0..self.poles.len() {
                    n += (self.coeff[s] * self.pole_integral(s, 0)?).re;
                }
                Ok(n)
            }
            FormFactor::Constant => {
                // −(π/sin πν) Σ_{±s} R_s e^{±iπν}
                let mut sum = Complex64::new(0.0, 0.0);
                for s in 0..self.poles.len() {
                    sum += self.raw_residue(s) * Complex64::from_polar(1.0, PI * self.nu);
                }
                Ok(-PI / crate::special::sin_pi(self.nu) * 2.0 * sum.re)
            }
            FormFactor::Gaussian { .. } => Err(Error::GaussianRejected),
        }
    }

    /// N by adaptive quadrature of the raw density.
    pub fn normalization_quadrature(&self) -> Result<f64> {
        let scale = self.norm;
        let opts = QuadOptions::tol(0.0, 1e-11);
        match self.energy_cutoff() {
            Some(e_max) => {
                let r = self.integrate_real_axis(e_max, None, &opts, |loc| {
                    Complex64::new(self.density_loc(loc) * scale, 0.0)
                })?;
                Ok(r.value.re)
            }
            None => {
                // algebraic tail Σ_k c_k E^{ν−1−k}, c_k = Re Σ γ_s z_s^{k−ν}
                let smax = self.poles.iter().map(|p| p.z().norm()).fold(0.0, f64::max);
                let x_cut = 1e3 * smax;
                let r = self.integrate_real_axis(x_cut, None, &opts, |loc| {
                    Complex64::new(self.density_loc(loc) * scale, 0.0)
                })?;
                let mut tail = 0.0;
                for k in 0..12 {
                    let ck: f64 = self
                        .poles
                        .iter()
                        .zip(&self.gamma)
                        .map(|(p, g)| {
                            -(g * complex_power(p.z(), k as f64 - self.nu).unwrap_or_default()).re
                        })
                        .sum();
                    let p = self.nu - 1.0 - k as f64;
                    tail += ck * -x_cut.powf(p + 1.0) / (p + 1.0);
                }
                Ok(r.value.re + tail)
            }
        }
    }

    /// Residuals of the constant form factor sum rules:
    /// Σ_{±s} R e^{±iπν} + sin(πν)/π and Σ_{±s} R/z^ν.
    pub fn constant_ff_residuals(&self) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for (s, p) in self.poles.iter().enumerate() {
            let r = self.raw_residue(s);
            a += 2.0 * (r * Complex64::from_polar(1.0, PI * self.nu)).re;
            b += 2.0 * (r / complex_power(p.z(), self.nu).unwrap_or_default()).re;
        }
        (a + crate::special::sin_pi(self.nu) / PI, b)
    }

    fn check_positivity(&self) -> Result<()> {
        if self.norm <= 0.0 {
            // the unnormalised density integrates to a negative number
            return Err(Error::NegativeDensity {
                energy: self.dominant().sigma,
                value: self.density_near(self.dominant, 0.0) * self.norm,
                peak: 0.0,
            });
        }
        let sd = self.dominant().sigma;
        let n = POSITIVITY_POINTS;
        let (lo, hi) = ((1e-6f64).ln(), (1e3f64).ln());
        let mut peak = 0.0f64;
        let mut worst = (0.0, f64::INFINITY);
        let mut probe = |e: f64, v: f64| {
            peak = peak.max(v);
            if v < worst.1 {
                worst = (e, v);
            }
        };
        for k in 0..n {
            let e = sd * (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp();
            probe(e, self.density(e));
        }
        for s in 0..self.poles.len() {
            probe(self.poles[s].sigma, self.density_near(s, 0.0));
        }
        if worst.1 < -POSITIVITY_REL_TOL * peak || peak <= 0.0 {
            return Err(Error::NegativeDensity {
                energy: worst.0,
                value: worst.1,
                peak,
            });
        }
        Ok(())
    }
}

/// Inserts points so that no gap exceeds h.
/// Residue of a lone pole with the constant form factor and the checks that
/// expose why such a density cannot describe a decaying state.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFfResidue {
    /// R(z_r) = −(1/2πi) z_rᵛ sin(πν) / Im(z_rᵛ e^{iπν})
    pub residue: Complex64,
    /// Σ_{±} R e^{±iπν} + sin(πν)/π, zero by construction.
    pub sum_rule: f64,
    /// Σ_{±} R / zᵛ, zero by construction.
    pub decay_rule: f64,
    /// Re(z_r^{p−ν} R) for p = 0..=4; every entry must vanish for finite moments.
    pub moment_conditions: Vec<f64>,
    /// True only when all moment conditions hold, which needs Im z_r = 0.
    pub consistent: bool,
}

pub fn constant_ff_residues(pole: Pole, nu: f64) -> Result<ConstantFfResidue> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::NuOutOfRange {
            nu,
            form_factor: "constant",
        });
    }
    let z = pole.z();
    let zn = complex_power(z, nu)?;
    let denom = (zn * Complex64::from_polar(1.0, PI * nu)).im;
    let residue = -zn * crate::special::sin_pi(nu) / (2.0 * PI * I * denom);
    let sum_rule =
        2.0 * (residue * Complex64::from_polar(1.0, PI * nu)).re + crate::special::sin_pi(nu) / PI;
    let decay_rule = 2.0 * (residue / zn).re;
    let moment_conditions = (0..=4)
        .map(|p| Ok((complex_power(z, p as f64 - nu)? * residue).re))
        .collect::<Result<Vec<f64>>>()?;
    let scale = residue.norm() * z.norm().max(1.0).powi(4);
    let consistent = moment_conditions.iter().all(|c| c.abs() <= 1e-12 * scale);
    Ok(ConstantFfResidue {
        residue,
        sum_rule,
        decay_rule,
        moment_conditions,
        consistent,
    })
}

/// Residues for P ≥ 2 poles with the constant form factor, from the sum rule
/// Σ_{±s} R e^{±iπν} = −sin(πν)/π together with the finiteness conditions
/// Σ_{±s} z^{p−ν} R = 0 for p = 0..2P−2 (2P real equations).
pub fn constant_ff_pole_set(poles: Vec<Pole>, nu: f64) -> Result<PoleSet> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::NuOutOfRange {
            nu,
            form_factor: "constant",
        });
    }
    if poles.len() < 2 {
        return Err(Error::SingleResonanceConstantFF);
    }
    let n = 2 * poles.len();
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut rhs = nalgebra::DVector::<f64>::zeros(n);
    let mut row = |r: usize, coeffs: &[Complex64]| {
        // 2 Re(c R) = 2 (c.re R.re − c.im R.im)
        for (s, c) in coeffs.iter().enumerate() {
            a[(r, 2 * s)] = 2.0 * c.re;
            a[(r, 2 * s + 1)] = -2.0 * c.im;
        }
    };
    let phase = Complex64::from_polar(1.0, PI * nu);
    row(0, &vec![phase; poles.len()]);
    rhs[0] = -crate::special::sin_pi(nu) / PI;
    for p in 0..n - 1 {
        let c = poles
            .iter()
            .map(|q| complex_power(q.z(), p as f64 - nu))
            .collect::<Result<Vec<_>>>()?;
        row(p + 1, &c);
    }
    let sol = a.lu().solve(&rhs).ok_or_else(|| {
        Error::NotApplicable("singular residue system for the constant form factor".into())
    })?;
    let residues = (0..poles.len())
        .map(|s| Complex64::new(sol[2 * s], sol[2 * s + 1]))
        .collect();
    PoleSet::new(poles, Residues::Explicit(residues))
}

pub(crate) fn refine(points: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        out.push(w[0]);
        let n = ((w[1] - w[0]) / h).ceil();
        if n > 1.0 && n < 1e7 {
            let n = n as usize;
            for k in 1..n {
                out.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
            }
        }
    }
    if let Some(last) = points.last() {
        out.push(*last);
    }
    out
}
