//! Boundary of W(A) for a random matrix, written as CSV to stdout.

use crouzeix_lab::linalg::random_complex_gaussian;
use crouzeix_lab::numerical_range::range_report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> crouzeix_lab::Result<()> {
    let a = random_complex_gaussian(&mut ChaCha8Rng::seed_from_u64(3), 4);
    let rep = range_report(&a, 256)?;
    eprintln!("w(A) = {:.10}", rep.radius);
    eprintln!("spectrum interior: {} (margin {:.4})", rep.spectrum_interior, rep.interior_margin);
    rep.boundary.write_csv(std::io::stdout())
}
