//! Compressed shift on a model space: explicit eigenvectors, condition
//! number and its bounds, and extremal vectors of B(S_Theta).

use crouzeix_lab::extremal_search::s_theta_extremal_suite;
use crouzeix_lab::hyp_geometry::{BlaschkeProduct, DiskPoint};
use crouzeix_lab::linalg::c;
use crouzeix_lab::model_space::{condition_report, ModelSpaceSystem};

fn main() -> crouzeix_lab::Result<()> {
    let zeros = DiskPoint::many(&[c(0.2, 0.1), c(-0.5, 0.3), c(0.4, -0.4), c(0.0, 0.7)])?;
    let rep = condition_report(&zeros)?;
    let sys = ModelSpaceSystem::new(zeros)?;
    println!("M_Theta =\n{:.4}", sys.m_theta);
    println!("eigenvector residual {:.2e}, inverse residual {:.2e}", sys.eigen_residual(), sys.inverse_residual());
    println!("delta = {:.4}", rep.delta);
    println!("kappa(X) = {:.4}  <= n/delta = {:.4}", rep.kappa_numeric, rep.bound_n_over_delta);
    println!("kappa(X) <= (8/d^6)(1 - 2 ln d) = {:.4e}", rep.bound_delta6);
    println!("||G||^2 = {:.4} <= {:.4e}", rep.gramian_norm_sq, rep.gramian_bound);

    let b = BlaschkeProduct::from_roots(&[c(0.3, 0.0), c(0.0, -0.2)])?;
    let s = s_theta_extremal_suite(&sys, &b, 1)?;
    println!("||B(S)|| = {:.12}, extremal subspace dimension {}", s.norm, s.subspace_dim);
    println!("basis ratios {:?}, random complement ratio {:?}", s.basis_ratios, s.complement_ratio);
    Ok(())
}
