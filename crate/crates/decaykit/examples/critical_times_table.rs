//! Critical times of the quadratic-to-exponential transition over twelve decades of x_d.

use decaykit::regions::{table1, TABLE1_X};

fn main() -> decaykit::Result<()> {
    let b_s = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2.0);
    println!("b_s = {b_s}, nu = 1/2");
    println!(
        "{:>8} {:>11} {:>11} {:>11} {:>8} {:>11}",
        "x_d", "tau_G", "tau_cs", "4 pi x_d", "n_G", "n_cs"
    );
    for row in table1(b_s, 0.5, &TABLE1_X)? {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4e}"));
        println!(
            "{:>8.0e} {:>11.4e} {:>11} {:>11.4e} {:>8.4} {:>11}",
            row.x_d,
            row.tau_g,
            opt(row.tau_cs),
            row.tau_osc,
            row.n_g,
            opt(row.n_cs)
        );
    }
    Ok(())
}
