//! Narrow-resonance density of states with an exponential form factor.
//!
//! Run with `cargo run --example density_of_states`.

use decaykit::dos::{normalize_dos, DimensionlessResonance};

fn main() -> decaykit::Result<()> {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0).density()?;
    let norm = normalize_dos(&dos)?;
    println!("N closed form  {:.12}", norm.closed_form);
    println!("N quadrature   {:.12}", norm.quadrature);
    println!("beta0          {:.12}", dos.beta0());
    println!("residue R(z_d) {:.6}", dos.residue(0));

    println!("\n{:>6} {:>12}", "E", "rho");
    for k in 0..=20 {
        let e = 0.1 * k as f64;
        println!("{e:>6.2} {:>12.6}", dos.density(e));
    }
    Ok(())
}
