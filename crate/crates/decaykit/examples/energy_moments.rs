//! Hamiltonian moments, the Taylor series of P(t) and the sign of the variance.

use decaykit::dos::DimensionlessResonance;
use decaykit::moments::{decomposed_taylor, moment_table, taylor_coefficients, variance_sign_scan};

fn main() -> decaykit::Result<()> {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0).density()?;
    let table = moment_table(&dos, 4)?;
    for (k, m) in table.moments.iter().enumerate() {
        println!("<H^{k}> = {m:.10}");
    }
    println!("variance = {:.10}", table.variance);

    let p = taylor_coefficients(&table.moments);
    println!(
        "\nP(t) = {:.6} + {:.2e} t + {:.6} t^2 + {:.2e} t^3 + ...",
        p[0], p[1], p[2], p[3]
    );

    let parts = decomposed_taylor(&dos, 4)?;
    println!(
        "linear terms: P_e {:.6}  P_ne {:.6}  P_i {:.6}  sum {:.1e}",
        parts.exponential[1],
        parts.nonexponential[1],
        parts.interference[1],
        parts.exponential[1] + parts.nonexponential[1] + parts.interference[1]
    );

    // the variance turns negative for a window of small b_s
    let grid: Vec<f64> = (0..=48)
        .map(|k| 10f64.powf(-6.0 + 0.125 * k as f64))
        .collect();
    let scan = variance_sign_scan(0.1, 0.5, &grid)?;
    for (lo, hi) in scan.negative_intervals {
        println!("\nvariance < 0 for b_s in ({lo:.4e}, {hi:.4})");
    }
    Ok(())
}
