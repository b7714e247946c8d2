//! Energy autocorrelation of the density and its cosine-transform pair with P(t).

use decaykit::autocorr::{
    autocorrelation, autocorrelation_lorentzian, lifetime_integral, wk_forward, wk_inverse,
    AutocorrCurve, SampledProbability,
};
use decaykit::dos::DimensionlessResonance;
use decaykit::survival::{amplitude, Route};

fn main() -> decaykit::Result<()> {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0).density()?;
    let w = dos.dominant().omega;

    println!("{:>8} {:>12} {:>12}", "y/w", "R", "Lorentzian");
    for k in 0..=8 {
        let y = 0.5 * k as f64 * w;
        println!(
            "{:>8.2} {:>12.6} {:>12.6}",
            y / w,
            autocorrelation(&dos, y)?,
            autocorrelation_lorentzian(&dos, y)
        );
    }

    // P from sampled R
    let y: Vec<f64> = (0..=6000).map(|k| 0.005 * k as f64).collect();
    let curve = AutocorrCurve::sample(&dos, &y)?;
    println!("\n{:>6} {:>14} {:>14}", "t", "P direct", "P from R");
    for t in [0.0, 2.0, 5.0, 10.0] {
        let direct = amplitude(&dos, t, Route::ClosedForm)?.norm_sqr();
        println!("{t:>6} {direct:>14.8} {:>14.8}", wk_forward(&curve, t)?);
    }

    // R from sampled P
    let sampled = SampledProbability::from_dos(&dos, 400.0, 0.05)?;
    println!("\nR(0) from P      {:.8}", wk_inverse(&sampled, 0.0)?);
    println!("R(0) direct      {:.8}", autocorrelation(&dos, 0.0)?);
    println!(
        "integral lifetime {:.6}  (1/w = {:.6})",
        lifetime_integral(&sampled)?,
        1.0 / w
    );
    Ok(())
}
