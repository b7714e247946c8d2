//! Incomplete gamma function and principal powers at complex arguments.

use decaykit::special::{complex_power, upper_incomplete_gamma};
use num_complex::Complex64;

fn main() -> decaykit::Result<()> {
    for (a, z) in [
        (0.5, Complex64::new(1.0, 2.0)),
        (-1.5, Complex64::new(0.1, -3.0)),
        (2.0, Complex64::new(-4.0, 0.5)),
    ] {
        println!("Gamma({a}, {z}) = {:.15}", upper_incomplete_gamma(a, z)?);
    }
    let z = Complex64::new(1.0, -0.1);
    println!("z^0.5 = {:.15}", complex_power(z, 0.5)?);
    Ok(())
}
