//! Extremal Blaschke products for Crabb matrices, norm and radius.

use crouzeix_lab::conformal_map::MapOverride;
use crouzeix_lab::extremal_search::{optimize_mapped, split_residuals, w_square_residual, Mode, SearchConfig};
use crouzeix_lab::matrix_functions::crabb_matrix;
use crouzeix_lab::pipeline::prepare;

fn main() -> crouzeix_lab::Result<()> {
    let cfg = SearchConfig { seed: 42, ..SearchConfig::default() };
    for n in 3..=5 {
        let prep = prepare(&crabb_matrix(n), 256, MapOverride::Identity)?;
        let r = optimize_mapped(prep.phi(), n - 1, Mode::Norm, &cfg)?;
        let worst = split_residuals(&r)?.into_iter().fold(0.0, f64::max);
        println!(
            "n={n}: ||f(C)|| = {:.10}, effective degree {}, max |alpha| = {:.1e}, orthogonality {:.1e}",
            r.attained,
            r.effective_degree,
            r.roots.iter().map(|z| z.norm()).fold(0.0, f64::max),
            worst
        );
    }
    let prep = prepare(&crabb_matrix(3), 256, MapOverride::Identity)?;
    let r = optimize_mapped(prep.phi(), 2, Mode::Radius, &cfg)?;
    println!("n=3 radius: w(f(C)) = {:.10}, |<f^2 y, y> - 1| = {:.1e}", r.attained, w_square_residual(&r));
    Ok(())
}
