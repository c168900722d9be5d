use clap::Parser;
use rapnet::cli::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Err(e) = run(cli, &argv) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
