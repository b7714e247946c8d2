//! Survival probability by three routes and its exponential, non-exponential
//! and interference parts.

use decaykit::dos::DimensionlessResonance;
use decaykit::survival::{amplitude, survival_probability, Route, TimeGrid};

fn main() -> decaykit::Result<()> {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0).density()?;

    println!(
        "{:>5} {:>14} {:>14} {:>14}",
        "n", "closed", "quadrature", "residues+ray"
    );
    for n in [0.5, 2.0, 10.0, 20.0] {
        let t = 2.0 * std::f64::consts::PI * n;
        let p = |r| amplitude(&dos, t, r).map(|a| a.norm_sqr());
        println!(
            "{n:>5} {:>14.6e} {:>14.6e} {:>14.6e}",
            p(Route::ClosedForm)?,
            p(Route::Quadrature)?,
            p(Route::Decomposition)?
        );
    }

    let grid = TimeGrid::linspace_n(&dos, 0.0, 30.0, 13);
    let curve = survival_probability(&dos, &grid, Route::Decomposition)?;
    println!(
        "\n{:>5} {:>12} {:>12} {:>12} {:>12}",
        "n", "P", "P_e", "P_ne", "P_i"
    );
    for p in &curve.points {
        println!(
            "{:>5.1} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            p.time.n, p.p, p.p_e, p.p_ne, p.p_i
        );
    }
    Ok(())
}
