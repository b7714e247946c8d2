//! Critical times and the piecewise decay law across the four time regions.

use decaykit::dos::DimensionlessResonance;
use decaykit::regions::{region_boundaries, PiecewiseModel};
use decaykit::survival::amplitude_closed_form;

fn main() -> decaykit::Result<()> {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0).density()?;
    let r = region_boundaries(&dos)?;
    println!(
        "variance tau_G     {:.5}  (n = {:.4})",
        r.tau_cs_variance, r.n_cs_variance
    );
    println!("first oscillation  {:.5}", r.tau_cs_oscillation);
    println!("|C|, arg C         {:.4}, {:.4}", r.c_modulus, r.c_arg);
    println!("m minimum at n     {:.4}", r.n_min_m);
    println!("n_cl               {:.4}", r.n_cl);

    let model = PiecewiseModel::new(&dos)?;
    println!(
        "\n{:>6} {:>13} {:>12} {:>12}",
        "n", "region", "piecewise", "full"
    );
    for n in [0.25, 0.75, 1.5, 5.0, 10.0, 14.0, 20.0, 30.0, 45.0] {
        let (region, p) = model.probability(n)?;
        let full = amplitude_closed_form(&dos, 2.0 * std::f64::consts::PI * n)?.norm_sqr();
        println!("{n:>6} {:>13} {p:>12.4e} {full:>12.4e}", region.name());
    }
    Ok(())
}
