//! Separation constant of a zero set, the Earl bound, and the minimal
//! interpolation norm from the Pick matrix.

use crouzeix_lab::hyp_geometry::{earl_bound, separation_constant, DiskPoint};
use crouzeix_lab::linalg::c;
use crouzeix_lab::pick_oracle::{check_earl_inequality, minimal_interpolation_norm, InterpolationProblem};

fn main() -> crouzeix_lab::Result<()> {
    let nodes = DiskPoint::many(&[c(0.5, 0.0), c(-0.3, 0.4), c(0.1, -0.6), c(-0.2, -0.1)])?;
    let sep = separation_constant(&nodes)?;
    println!("delta = {:.6}, attained at node {}", sep.delta, sep.argmin_index);
    println!("M(delta) = {:.6}", earl_bound(sep.delta)?);
    println!("M(2 sqrt2/3) = {:.15}", earl_bound(2.0 * 2f64.sqrt() / 3.0)?);

    let targets = vec![c(0.9, 0.0), c(0.0, -0.9), c(-0.9, 0.0), c(0.0, 0.9)];
    let problem = InterpolationProblem::new(nodes, targets)?;
    println!("minimal interpolation norm = {:.9}", minimal_interpolation_norm(&problem)?);
    let rep = check_earl_inequality(&problem)?;
    println!("Pick value {:.6} <= M(delta) max|w| = {:.6}: {}", rep.lhs, rep.rhs, rep.holds);
    Ok(())
}
