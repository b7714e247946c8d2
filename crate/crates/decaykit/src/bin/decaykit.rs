use clap::Parser;
use decaykit::cli::{run, Args};

fn main() {
    let args = Args::parse();
    if let Err(e) = run(&args) {
        eprintln!("decaykit: {}: {e}", e.kind());
        std::process::exit(e.exit_code());
    }
}
