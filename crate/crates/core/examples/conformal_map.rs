//! Riemann map of an ellipse onto the disk, checked against its inverse and
//! a finer discretization.

use std::f64::consts::TAU;

use crouzeix_lab::conformal_map::build_map;
use crouzeix_lab::linalg::{c, C64};
use crouzeix_lab::numerical_range::DomainBoundary;

fn main() -> crouzeix_lab::Result<()> {
    let coarse = build_map(&DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, 256), c(0.0, 0.0))?;
    let fine = build_map(&DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, 512), c(0.0, 0.0))?;
    println!("kind {}, residual {:.2e}", coarse.kind, coarse.residual);
    let modulus = coarse.boundary_values.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
    println!("max ||phi| - 1| on the boundary: {modulus:.2e}");
    for k in 0..6 {
        let w = C64::from_polar(0.7, TAU * k as f64 / 6.0);
        let z = coarse.inverse(w)?;
        println!(
            "phi^-1({w:.3}) = {z:.6}   |phi(z) - w| = {:.1e}   |phi_m - phi_2m| = {:.1e}",
            (coarse.eval(z)? - w).norm(),
            (coarse.eval(z)? - fine.eval(z)?).norm()
        );
    }
    println!("phi(0.5) = {:.12}", coarse.eval(c(0.5, 0.0))?);
    Ok(())
}
