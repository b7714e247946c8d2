//! Command dispatch and deterministic output for the `decaykit` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::autocorr::{autocorrelation, autocorrelation_lorentzian};
use crate::config::{Format, Scenario};
use crate::dos::FormFactor;
use crate::exec::par_map;
use crate::moments::moment_table;
use crate::regions::{be8, region_boundaries, table1};
use crate::survival::{survival_probability, Route};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Dos,
    Survival,
    Autocorr,
    Moments,
    Regions,
    Table1,
    Be8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Densities of states, survival probabilities and critical times of unstable states.
#[derive(Debug, Parser)]
#[command(name = "decaykit", version)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Scenario file (TOML, or JSON with a .json extension).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Form-factor slope b_s = b Re z_d.
    #[arg(long = "b-s", allow_negative_numbers = true)]
    pub b_s: Option<f64>,
    /// Threshold exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
}

/// Warning threshold below which only the closed form is trusted at small times.
pub const SMALL_B_S: f64 = 1e-3;

/// Parses the scenario, runs the command and writes the result.
pub fn run(args: &Args) -> Result<()> {
    let mut scenario = Scenario::from_path(&args.config)?;
    scenario.apply_overrides(args.b_s, args.nu)?;
    let format = match args.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None => scenario.output.format.unwrap_or(Format::Csv),
    };
    let text = render(args.command, &scenario, format)?;
    let out = args
        .out
        .clone()
        .or_else(|| scenario.output.path.clone().map(PathBuf::from));
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Output of one command as text.
pub fn render(command: Command, scenario: &Scenario, format: Format) -> Result<String> {
    match command {
        Command::Dos => Ok(dos_table(scenario)?.render(format)),
        Command::Survival => Ok(survival_table(scenario)?.render(format)),
        Command::Autocorr => Ok(autocorr_table(scenario)?.render(format)),
        Command::Moments => {
            let t = moment_table(&scenario.density()?, scenario.moments.max_order)?;
            let mut rows: Vec<(String, f64)> = t
                .moments
                .iter()
                .enumerate()
                .map(|(k, m)| (format!("moment_{k}"), *m))
                .collect();
            rows.push(("variance".into(), t.variance));
            summary(&t, &rows, format)
        }
        Command::Regions => {
            let r = region_boundaries(&scenario.density()?)?;
            let mut rows = vec![
                ("x_d".to_string(), r.x_d),
                ("nu".into(), r.nu),
                ("variance".into(), r.variance),
                ("alpha".into(), r.alpha),
                ("residue_sq".into(), r.residue_sq),
                ("tau_cs_oscillation".into(), r.tau_cs_oscillation),
            ];
            for (k, t) in r.tau_cs_intersection.iter().enumerate() {
                rows.push((format!("tau_cs_intersection_{k}"), *t));
            }
            rows.extend([
                ("tau_cs_variance".into(), r.tau_cs_variance),
                ("n_cs_variance".into(), r.n_cs_variance),
                ("c_modulus".into(), r.c_modulus),
                ("c_arg".into(), r.c_arg),
                ("n_small".into(), r.n_small),
                ("n_cl".into(), r.n_cl),
                ("n_min_m".into(), r.n_min_m),
            ]);
            summary(&r, &rows, format)
        }
        Command::Table1 => {
            let rows = table1(scenario.table1.b_s, scenario.table1.nu, &scenario.table1.x)?;
            match format {
                Format::Json => Ok(json(&rows)),
                Format::Csv => {
                    let mut t = Table::new(&["x_d", "tau_G", "tau_cs", "tau_osc", "n_G", "n_cs"]);
                    for r in &rows {
                        t.push(vec![
                            Some(r.x_d),
                            Some(r.tau_g),
                            r.tau_cs,
                            Some(r.tau_osc),
                            Some(r.n_g),
                            r.n_cs,
                        ]);
                    }
                    Ok(t.to_csv())
                }
            }
        }
        Command::Be8 => {
            let r = be8(scenario.be8.b_s, scenario.be8.nu)?;
            let mut rows = vec![
                ("re_kev".to_string(), r.re_kev),
                ("im_ev".into(), r.im_ev),
                ("nu".into(), r.nu),
                ("b_s".into(), r.b_s),
                ("x_s".into(), r.x_s),
                ("b_per_mev".into(), r.b_per_mev),
                ("period_lifetimes".into(), r.period_lifetimes),
                ("variance".into(), r.variance),
            ];
            for (k, (lo, hi)) in r.negative_variance.iter().enumerate() {
                rows.push((format!("negative_variance_{k}_lo"), *lo));
                rows.push((format!("negative_variance_{k}_hi"), *hi));
            }
            summary(&r, &rows, format)
        }
    }
}

fn dos_table(s: &Scenario) -> Result<Table> {
    let dos = s.density()?;
    let n = s.dos.count;
    let e: Vec<f64> = (0..n)
        .map(|k| s.dos.e_max * k as f64 / (n - 1) as f64)
        .collect();
    let rho = par_map(&e, |&e| dos.density(e));
    let mut t = Table::new(&["E", "rho"]);
    for (e, r) in e.iter().zip(rho) {
        t.push(vec![Some(*e), Some(r)]);
    }
    Ok(t)
}

fn survival_table(s: &Scenario) -> Result<Table> {
    let dos = s.density()?;
    let route = s.survival.route.unwrap_or(match dos.form_factor() {
        FormFactor::Exponential { .. } => Route::ClosedForm,
        _ => Route::Quadrature,
    });
    if let Some(b) = s.b_s() {
        if b < SMALL_B_S && route != Route::ClosedForm {
            eprintln!("decaykit: warning: b_s = {b} < {SMALL_B_S}; only the closed form is reliable at small times");
        }
    }
    let curve = survival_probability(&dos, &s.grid.time_grid(&dos)?, route)?;
    let mut t = Table::new(&["n", "tau", "P", "P_e", "P_ne", "P_i", "I"]);
    for p in &curve.points {
        let i = p.p / (p.p_e + p.p_ne);
        t.push(vec![
            Some(p.time.n),
            Some(p.time.tau),
            Some(p.p),
            Some(p.p_e),
            Some(p.p_ne),
            Some(p.p_i),
            Some(i),
        ]);
    }
    Ok(t)
}

fn autocorr_table(s: &Scenario) -> Result<Table> {
    let dos = s.density()?;
    let w = dos.dominant().omega;
    let n = s.autocorr.count;
    let y: Vec<f64> = (0..n)
        .map(|k| s.autocorr.y_max * w * k as f64 / (n - 1) as f64)
        .collect();
    let r = par_map(&y, |&y| autocorrelation(&dos, y))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["y", "R", "R_lorentzian"]);
    for (y, r) in y.iter().zip(r) {
        t.push(vec![
            Some(*y),
            Some(r),
            Some(autocorrelation_lorentzian(&dos, *y)),
        ]);
    }
    Ok(t)
}

/// Key-value CSV or the full JSON summary.
fn summary<T: Serialize>(value: &T, rows: &[(String, f64)], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json(value),
        Format::Csv => {
            let mut out = String::from("name,value\n");
            for (k, v) in rows {
                let _ = writeln!(out, "{k},{}", number(*v));
            }
            out
        }
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

/// Decimal with 17 significant digits, which round-trips every f64.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Columns of numbers; `None` is written as an empty CSV field and JSON null.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Option<f64>>) {
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| v.map(number).unwrap_or_default())
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                    .collect()
            })
            .collect();
        json(&rows)
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
