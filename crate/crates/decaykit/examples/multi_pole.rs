//! Two narrow resonances: beating of the exponential part.

use decaykit::dos::{build_dos, FormFactor, Pole, PoleSet};
use decaykit::regions::multi_pole_modulation;

fn main() -> decaykit::Result<()> {
    let set = PoleSet::narrow(vec![Pole::new(1.0, 0.02)?, Pole::new(1.1, 0.06)?])?;
    let dos = build_dos(&set, 0.5, FormFactor::Exponential { b: 1.0 })?;
    let m0 = multi_pole_modulation(&dos, 0.0)?;
    println!(
        "frequency {:.3} per lifetime, damping {:.3}",
        m0.frequency, m0.damping
    );
    println!("{:>6} {:>10} {:>10}", "tau", "M full", "nearest");
    for k in 0..=12 {
        let tau = 0.25 * k as f64;
        let m = multi_pole_modulation(&dos, tau)?;
        println!("{tau:>6.2} {:>10.6} {:>10.6}", m.full, m.nearest);
    }
    Ok(())
}
