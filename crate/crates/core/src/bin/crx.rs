use clap::Parser;
use crouzeix_lab::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
