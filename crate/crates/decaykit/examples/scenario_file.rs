//! Parses a scenario and renders a command's output, as the binary does.

use decaykit::cli::{render, Command};
use decaykit::config::{Format, Scenario};

const SCENARIO: &str = r#"
[resonance]
x_d = 0.1
nu = 0.5
b_s = 1.0

[grid]
n_max = 20.0
count = 5
spacing = "linear"
"#;

fn main() -> decaykit::Result<()> {
    let scenario = Scenario::from_toml_str(SCENARIO)?;
    print!("{}", render(Command::Survival, &scenario, Format::Csv)?);
    print!("{}", render(Command::Regions, &scenario, Format::Json)?);
    Ok(())
}
