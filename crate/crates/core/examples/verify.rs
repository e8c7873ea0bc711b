//! Runs the acceptance criteria, optionally restricted to one suite.
//!
//! `cargo run --release --example verify -- model_space`

use crouzeix_lab::verify::{run, VerifyOptions};

fn main() {
    let suite = std::env::args().nth(1);
    let report = run(&VerifyOptions { suite, inject_failure: None }).expect("valid suite name");
    for c in &report.criteria {
        println!("{}", c.line());
        for n in &c.notes {
            println!("      {n}");
        }
    }
    println!("all passed: {}", report.all_passed);
}
