//! The 8Be(0+) ground state, decaying into two alpha particles.

use decaykit::regions::be8;

fn main() -> decaykit::Result<()> {
    let r = be8(1.0, 0.5)?;
    println!("pole         {} keV - i {} eV", r.re_kev, r.im_ev);
    println!("x_s          {:.4e}", r.x_s);
    println!("b            {:.4} MeV^-1", r.b_per_mev);
    println!("period       {:.4e} lifetimes", r.period_lifetimes);
    println!("variance     {:.4e}", r.variance);
    for (lo, hi) in &r.negative_variance {
        println!("variance < 0 for b_s in ({lo:.3e}, {hi:.3})");
    }
    Ok(())
}
