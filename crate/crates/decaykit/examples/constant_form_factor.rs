//! The constant form factor: why one pole is not enough, and a two-pole density.

use decaykit::dos::{build_dos, constant_ff_pole_set, constant_ff_residues, FormFactor, Pole};
use decaykit::survival::{amplitude, Route};

fn main() -> decaykit::Result<()> {
    let lone = constant_ff_residues(Pole::new(1.0, 0.2)?, 0.5)?;
    println!("lone pole residue   {:.6}", lone.residue);
    println!("moment conditions   {:?}", lone.moment_conditions);
    println!("consistent          {}", lone.consistent);

    let poles = vec![Pole::new(1.0, 0.04)?, Pole::new(1.4, 0.18)?];
    let set = constant_ff_pole_set(poles, 0.5)?;
    let dos = build_dos(&set, 0.5, FormFactor::Constant)?;
    println!("\n{:>6} {:>14} {:>14}", "t", "quadrature", "residues+ray");
    for t in [0.0, 5.0, 20.0, 60.0, 150.0] {
        let q = amplitude(&dos, t, Route::Quadrature)?.norm_sqr();
        let d = amplitude(&dos, t, Route::Decomposition)?.norm_sqr();
        println!("{t:>6} {q:>14.8e} {d:>14.8e}");
    }
    Ok(())
}
