//! Apparent degrees of extremal Blaschke products for random dense matrices.
//!
//! `cargo run --example degree_census -- 3 50 7`

use crouzeix_lab::extremal_search::census::{degree_census, degree_fraction, write_census_csv};
use crouzeix_lab::extremal_search::SearchConfig;

fn main() -> crouzeix_lab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let samples: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);

    let rows = degree_census(n, samples, seed, 256, &SearchConfig::default());
    write_census_csv(&rows, std::io::stdout())?;
    for d in 0..n {
        eprintln!("degree {d}: {:.0}%", 100.0 * degree_fraction(&rows, d));
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("failed rows: {failed}");
    Ok(())
}
