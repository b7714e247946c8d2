//! Scenario files for the command-line tool.
//!
//! A scenario is read from TOML, or from JSON when the file name ends in
//! `.json`. Both forms share one schema; see `docs/formats.md`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dos::{
    build_dos_with, constant_ff_pole_set, BuildOptions, DensityOfStates, DimensionlessResonance,
    FormFactor, Pole, PoleSet, Residues,
};
use crate::regions::TABLE1_X;
use crate::survival::{Route, TimeGrid};
use crate::{Error, Result};

/// Largest accepted grid.
pub const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Single narrow resonance in dimensionless form.
    pub resonance: Option<DimensionlessResonance>,
    /// Pole list in physical units.
    pub physical: Option<PhysicalSpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub survival: SurvivalSpec,
    #[serde(default)]
    pub dos: DosSpec,
    #[serde(default)]
    pub autocorr: AutocorrSpec,
    #[serde(default)]
    pub moments: MomentsSpec,
    #[serde(default)]
    pub table1: Table1Spec,
    #[serde(default)]
    pub be8: Be8Spec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormFactorKind {
    Exponential,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSpec {
    pub nu: f64,
    pub form_factor: FormFactorKind,
    /// Exponential slope b in MeV⁻¹.
    pub b_per_mev: Option<f64>,
    pub poles: Vec<PhysicalPole>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalPole {
    pub re_kev: f64,
    /// |Im z| in eV.
    pub im_ev: f64,
    /// Residue [re, im] of the unnormalised density in units of the dominant
    /// Re z. Either every pole has one or none does.
    pub residue: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Last point in oscillations n.
    pub n_max: Option<f64>,
    /// Last point in lifetimes τ = ω_d t.
    pub tau_max: Option<f64>,
    /// First point, in the same variable. Defaults to 0 (linear) or 1e-4 of
    /// the end (log).
    pub start: Option<f64>,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_max: Some(10.0),
            tau_max: None,
            start: None,
            count: 201,
            spacing: Spacing::Linear,
        }
    }
}

/// Values along one axis of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    N,
    Tau,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.axis()?;
        if !(2..=MAX_POINTS).contains(&self.count) {
            return Err(Error::Config(format!(
                "grid count must lie in [2, {MAX_POINTS}], got {}",
                self.count
            )));
        }
        let (lo, hi) = self.range()?;
        if !(hi.is_finite() && lo.is_finite() && hi > lo && lo >= 0.0) {
            return Err(Error::Config(format!(
                "grid range [{lo}, {hi}] is empty or negative"
            )));
        }
        if self.spacing == Spacing::Log && lo <= 0.0 {
            return Err(Error::Config("log spacing needs a positive start".into()));
        }
        Ok(())
    }

    pub fn axis(&self) -> Result<(Axis, f64)> {
        match (self.n_max, self.tau_max) {
            (Some(n), None) => Ok((Axis::N, n)),
            (None, Some(t)) => Ok((Axis::Tau, t)),
            _ => Err(Error::Config(
                "grid needs exactly one of n_max and tau_max".into(),
            )),
        }
    }

    fn range(&self) -> Result<(f64, f64)> {
        let (_, hi) = self.axis()?;
        let lo = self.start.unwrap_or(match self.spacing {
            Spacing::Linear => 0.0,
            Spacing::Log => 1e-4 * hi,
        });
        Ok((lo, hi))
    }

    /// Grid values, endpoints included.
    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let (lo, hi) = self.range()?;
        let last = (self.count - 1) as f64;
        Ok(match self.spacing {
            Spacing::Linear => (0..self.count)
                .map(|k| lo + (hi - lo) * k as f64 / last)
                .collect(),
            Spacing::Log => {
                let (a, b) = (lo.ln(), hi.ln());
                (0..self.count)
                    .map(|k| (a + (b - a) * k as f64 / last).exp())
                    .collect()
            }
        })
    }

    pub fn time_grid(&self, dos: &DensityOfStates) -> Result<TimeGrid> {
        let values = self.values()?;
        Ok(match self.axis()?.0 {
            Axis::N => TimeGrid::from_n(dos, &values),
            Axis::Tau => TimeGrid::from_tau(dos, &values),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurvivalSpec {
    /// Defaults to the closed form for the exponential form factor and to
    /// quadrature otherwise.
    pub route: Option<Route>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DosSpec {
    /// Upper energy in units of the dominant Re z.
    pub e_max: f64,
    pub count: usize,
}

impl Default for DosSpec {
    fn default() -> Self {
        Self {
            e_max: 3.0,
            count: 601,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AutocorrSpec {
    /// Upper offset in widths ω_d.
    pub y_max: f64,
    pub count: usize,
}

impl Default for AutocorrSpec {
    fn default() -> Self {
        Self {
            y_max: 10.0,
            count: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentsSpec {
    pub max_order: u32,
}

impl Default for MomentsSpec {
    fn default() -> Self {
        Self { max_order: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Table1Spec {
    pub b_s: f64,
    pub nu: f64,
    pub x: Vec<f64>,
}

impl Default for Table1Spec {
    fn default() -> Self {
        Self {
            b_s: 2.0,
            nu: 0.5,
            x: TABLE1_X.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Be8Spec {
    pub b_s: f64,
    pub nu: f64,
}

impl Default for Be8Spec {
    fn default() -> Self {
        Self { b_s: 1.0, nu: 0.5 }
    }
}

impl Scenario {
    /// Reads a scenario, choosing JSON or TOML by file extension.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let s: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.resonance, &self.physical) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => {
                return Err(Error::Config(
                    "exactly one of [resonance] and [physical] must be given".into(),
                ))
            }
        }
        self.grid.validate()?;
        if self.dos.count < 2 || self.autocorr.count < 2 {
            return Err(Error::Config("curve counts must be at least 2".into()));
        }
        if let Some(p) = &self.physical {
            let with = p.poles.iter().filter(|q| q.residue.is_some()).count();
            if with != 0 && with != p.poles.len() {
                return Err(Error::ResidueCountMismatch {
                    residues: with,
                    poles: p.poles.len(),
                });
            }
        }
        Ok(())
    }

    /// Applies `--b-s` and `--nu`. For a physical scenario b_s sets b = b_s / Re z_d.
    pub fn apply_overrides(&mut self, b_s: Option<f64>, nu: Option<f64>) -> Result<()> {
        if let Some(r) = self.resonance.as_mut() {
            if let Some(b) = b_s {
                r.b_s = b;
            }
            if let Some(n) = nu {
                r.nu = n;
            }
        }
        if let Some(p) = self.physical.as_mut() {
            if let Some(n) = nu {
                p.nu = n;
            }
            if let Some(b) = b_s {
                let re_mev = 1e-3 * dominant_re_kev(&p.poles)?;
                p.b_per_mev = Some(b / re_mev);
            }
        }
        if let Some(b) = b_s {
            self.table1.b_s = b;
            self.be8.b_s = b;
        }
        if let Some(n) = nu {
            self.table1.nu = n;
            self.be8.nu = n;
        }
        Ok(())
    }

    /// Dimensionless b_s of the scenario, if it has an exponential form factor.
    pub fn b_s(&self) -> Option<f64> {
        if let Some(r) = &self.resonance {
            return Some(r.b_s);
        }
        let p = self.physical.as_ref()?;
        let re_mev = 1e-3 * dominant_re_kev(&p.poles).ok()?;
        p.b_per_mev.map(|b| b * re_mev)
    }

    /// Builds the density in units of the dominant Re z.
    pub fn density(&self) -> Result<DensityOfStates> {
        if let Some(r) = &self.resonance {
            return r.density();
        }
        let p = self
            .physical
            .as_ref()
            .ok_or_else(|| Error::Config("no resonance given".into()))?;
        let scale = dominant_re_kev(&p.poles)?;
        let poles = p
            .poles
            .iter()
            .map(|q| {
                let raw = Pole::from_kev_ev(q.re_kev, q.im_ev)?;
                Pole::new(raw.sigma / scale, raw.omega / scale)
            })
            .collect::<Result<Vec<_>>>()?;
        let explicit = p.poles.iter().all(|q| q.residue.is_some());
        let residues = || {
            Residues::Explicit(
                p.poles
                    .iter()
                    .map(|q| {
                        q.residue
                            .map(|[re, im]| Complex64::new(re, im))
                            .unwrap_or_default()
                    })
                    .collect(),
            )
        };
        match p.form_factor {
            FormFactorKind::Exponential => {
                let b = p.b_per_mev.ok_or_else(|| {
                    Error::Config("exponential form factor needs b_per_mev".into())
                })?;
                let set = if explicit {
                    PoleSet::new(poles, residues())?
                } else {
                    PoleSet::narrow(poles)?
                };
                let b_s = b * 1e-3 * scale;
                build_dos_with(
                    &set,
                    p.nu,
                    FormFactor::Exponential { b: b_s },
                    BuildOptions::default(),
                )
            }
            FormFactorKind::Constant => {
                let set = if explicit {
                    PoleSet::new(poles, residues())?
                } else {
                    constant_ff_pole_set(poles, p.nu)?
                };
                build_dos_with(&set, p.nu, FormFactor::Constant, BuildOptions::default())
            }
        }
    }
}

/// Re z in keV of the narrowest pole.
fn dominant_re_kev(poles: &[PhysicalPole]) -> Result<f64> {
    poles
        .iter()
        .min_by(|a, b| a.im_ev.total_cmp(&b.im_ev))
        .map(|p| p.re_kev)
        .ok_or_else(|| Error::InvalidPole("empty pole list".into()))
}
