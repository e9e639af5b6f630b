use clap::Parser;
use pnp1d::harness::cli;

fn main() {
    let args = cli::Cli::parse();
    if let Err(e) = cli::dispatch(&args) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
