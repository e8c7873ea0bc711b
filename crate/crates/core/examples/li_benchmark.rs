//! Li's 3x3 family: the apparent degree of the extremal function drops from
//! 2 to 1 as t crosses 1 - 1/sqrt(3).

use crouzeix_lab::conformal_map::MapOverride;
use crouzeix_lab::extremal_search::{optimize_mapped, Mode, SearchConfig};
use crouzeix_lab::matrix_functions::li_matrix;
use crouzeix_lab::numerical_range::numerical_radius;
use crouzeix_lab::pipeline::prepare;

fn main() -> crouzeix_lab::Result<()> {
    let cfg = SearchConfig { seed: 42, ..SearchConfig::default() };
    println!("t,w(A),degree1,degree2,effective_degree");
    for k in 0..=10 {
        let t = 0.05 + 0.06 * k as f64;
        let a = li_matrix(t);
        let prep = prepare(&a, 256, MapOverride::Auto)?;
        let d1 = optimize_mapped(prep.phi(), 1, Mode::Norm, &cfg)?;
        let d2 = optimize_mapped(prep.phi(), 2, Mode::Norm, &cfg)?;
        println!("{t:.3},{:.10},{:.10},{:.10},{}", numerical_radius(&a), d1.attained, d2.attained, d2.effective_degree);
    }
    Ok(())
}
