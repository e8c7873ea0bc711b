//! Compressed shifts on model spaces `K_Theta` for finite Blaschke products
//! with distinct zeros.
//!
//! Two matrix conventions appear here. [`build_m_theta`] returns the upper
//! triangular matrix `M_Theta` whose eigenvector matrices have the closed forms
//! of [`eigvec_matrices`]. The matrix that acts on Takenaka-Malmquist coordinate
//! vectors (column `j` holds the coordinates of `S_Theta phi_j`) is its
//! transpose, see [`shift_matrix_tm`]. Both are unitarily equivalent to
//! `S_Theta`, so norms and numerical ranges agree; vector-level statements
//! (extremal vectors, boundary densities) use the coordinate convention.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{CrxError, Result};
use crate::hyp_geometry::{
    blaschke_factor, check_distinct, separation_constant, BlaschkeProduct, DiskPoint, SeparationReport,
};
use crate::linalg::{cond, diag, frobenius, op_norm, singular_values, CMat, CVec, C64};

fn defect(z: C64) -> f64 {
    (1.0 - z.norm_sqr()).sqrt()
}

fn raw_zeros(zeros: &[DiskPoint]) -> Result<Vec<C64>> {
    let raw: Vec<C64> = zeros.iter().map(|p| p.value()).collect();
    check_distinct(&raw)?;
    Ok(raw)
}

/// Upper triangular `M_Theta`: `z_i` on the diagonal and
/// `prod_{i<k<j} (-conj z_k) sqrt(1-|z_i|^2) sqrt(1-|z_j|^2)` above it.
pub fn build_m_theta(zeros: &[DiskPoint]) -> Result<CMat> {
    let z = raw_zeros(zeros)?;
    let n = z.len();
    Ok(CMat::from_fn(n, n, |i, j| {
        if i == j {
            z[i]
        } else if i < j {
            let prod: C64 = (i + 1..j).map(|k| -z[k].conj()).product();
            prod * defect(z[i]) * defect(z[j])
        } else {
            C64::from(0.0)
        }
    }))
}

/// Matrix of `S_Theta` acting on Takenaka-Malmquist coordinate vectors.
pub fn shift_matrix_tm(zeros: &[DiskPoint]) -> Result<CMat> {
    Ok(build_m_theta(zeros)?.transpose())
}

/// Closed-form eigenvector matrix `X` and its inverse with `M_Theta = X Lambda X^{-1}`.
pub fn eigvec_matrices(zeros: &[DiskPoint]) -> Result<(CMat, CMat)> {
    let z = raw_zeros(zeros)?;
    let n = z.len();
    let x = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::from(1.0)
        } else if i < j {
            let prod: C64 = (i + 1..j).map(|k| (1.0 - z[k].conj() * z[j]) / (z[j] - z[k])).product();
            prod * defect(z[i]) * defect(z[j]) / (z[j] - z[i])
        } else {
            C64::from(0.0)
        }
    });
    let x_inv = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::from(1.0)
        } else if i < j {
            let prod: C64 = (i + 1..j).map(|k| (1.0 - z[k].conj() * z[i]) / (z[i] - z[k])).product();
            prod * defect(z[i]) * defect(z[j]) / (z[i] - z[j])
        } else {
            C64::from(0.0)
        }
    });
    Ok((x, x_inv))
}

/// Everything derived from a set of distinct zeros.
#[derive(Debug, Clone)]
pub struct ModelSpaceSystem {
    zeros: Vec<DiskPoint>,
    pub m_theta: CMat,
    pub lambda: Vec<C64>,
    pub x_mat: CMat,
    pub x_inv: CMat,
    pub separation: SeparationReport,
}

impl ModelSpaceSystem {
    pub fn new(zeros: Vec<DiskPoint>) -> Result<Self> {
        if zeros.len() < 2 {
            return Err(CrxError::Input("model space needs at least two zeros".into()));
        }
        let m_theta = build_m_theta(&zeros)?;
        let (x_mat, x_inv) = eigvec_matrices(&zeros)?;
        let separation = separation_constant(&zeros)?;
        let lambda = zeros.iter().map(|p| p.value()).collect();
        Ok(ModelSpaceSystem { zeros, m_theta, lambda, x_mat, x_inv, separation })
    }

    pub fn dim(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[DiskPoint] {
        &self.zeros
    }

    pub fn raw_zeros(&self) -> Vec<C64> {
        self.lambda.clone()
    }

    /// Coordinate-convention matrix of `S_Theta`.
    pub fn shift_tm(&self) -> CMat {
        self.m_theta.transpose()
    }

    /// `||M X - X Lambda||_F`
    pub fn eigen_residual(&self) -> f64 {
        frobenius(&(&self.m_theta * &self.x_mat - &self.x_mat * diag(&self.lambda)))
    }

    /// `||X^{-1} X - I||_F`
    pub fn inverse_residual(&self) -> f64 {
        let n = self.dim();
        frobenius(&(&self.x_inv * &self.x_mat - CMat::identity(n, n)))
    }
}

/// Both sides of the telescoping identity used for the eigenvector formulas:
/// `sum_k (1-|a_k|^2) prod_{l>k}(1 - conj(a_l) b) prod_{j<k}(|a_j|^2 - conj(a_j) b)
///  + prod_j (|a_j|^2 - conj(a_j) b) = prod_j (1 - conj(a_j) b)`.
pub fn lemma_tech_check(a: &[C64], b: C64) -> (C64, C64, f64) {
    let m = a.len();
    let tail = |k: usize| -> C64 { (k + 1..m).map(|l| 1.0 - a[l].conj() * b).product() };
    let head = |k: usize| -> C64 { (0..k).map(|j| a[j].norm_sqr() - a[j].conj() * b).product() };
    let sum: C64 = (0..m).map(|k| (1.0 - a[k].norm_sqr()) * tail(k) * head(k)).sum();
    let lhs = sum + head(m);
    let rhs: C64 = a.iter().map(|ak| 1.0 - ak.conj() * b).product();
    (lhs, rhs, (lhs - rhs).norm())
}

/// Gramian of the normalized reproducing kernels,
/// `G_ij = sqrt(1-|z_i|^2) sqrt(1-|z_j|^2) / (1 - conj(z_i) z_j)`.
pub fn gramian(zeros: &[DiskPoint]) -> Result<CMat> {
    let z = raw_zeros(zeros)?;
    let n = z.len();
    Ok(CMat::from_fn(n, n, |i, j| defect(z[i]) * defect(z[j]) / (1.0 - z[i].conj() * z[j])))
}

/// `(2/delta^4)(1 - 2 ln delta)`
pub fn gramian_bound(delta: f64) -> f64 {
    2.0 / delta.powi(4) * (1.0 - 2.0 * delta.ln())
}

/// `(8/delta^6)(1 - 2 ln delta)`
pub fn condition_bound_delta6(delta: f64) -> f64 {
    8.0 / delta.powi(6) * (1.0 - 2.0 * delta.ln())
}

/// Condition numbers of the closed-form eigenvector matrix and the bounds they
/// are compared against.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub n: usize,
    pub delta: f64,
    /// `||X|| ||X^{-1}||` for the unit-diagonal closed-form `X`.
    pub kappa_numeric: f64,
    /// Frobenius-norm condition number of the same `X`.
    pub kappa_frobenius: f64,
    /// Operator condition number after scaling the columns of `X` to unit length.
    pub kappa_unit_columns: f64,
    /// Frobenius condition number of the unit-column `X`.
    pub kappa_frobenius_unit_columns: f64,
    /// `sqrt(n) * sqrt(sum_j 1/delta_j^2)`
    pub frobenius_intermediate: f64,
    pub bound_n_over_delta: f64,
    pub bound_delta6: f64,
    pub bound_rasmith_adjusted: f64,
    pub gramian_norm_sq: f64,
    pub gramian_bound: f64,
    pub holds_delta6: bool,
    pub holds_n_over_delta: bool,
    pub holds_rasmith_adjusted: bool,
    pub holds_gramian: bool,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.holds_delta6 && self.holds_n_over_delta && self.holds_rasmith_adjusted && self.holds_gramian
    }
}

/// Largest `kappa` with `n - 2 + kappa + 1/kappa <= kappa_f`.
pub fn rasmith_adjusted(kappa_f: f64, n: usize) -> f64 {
    let t = kappa_f - n as f64 + 2.0;
    if t < 2.0 {
        return 1.0;
    }
    0.5 * (t + (t * t - 4.0).sqrt())
}

pub fn condition_report(zeros: &[DiskPoint]) -> Result<ConditionReport> {
    let sys = ModelSpaceSystem::new(zeros.to_vec())?;
    let n = sys.dim();
    let delta = sys.separation.delta;
    if delta < 1e-6 {
        return Err(CrxError::SeparationTooSmall(delta));
    }
    let kappa_numeric = op_norm(&sys.x_mat) * op_norm(&sys.x_inv);
    let kappa_frobenius = frobenius(&sys.x_mat) * frobenius(&sys.x_inv);

    let mut xu = sys.x_mat.clone();
    for j in 0..n {
        let nj = xu.column(j).norm();
        xu.column_mut(j).scale_mut(1.0 / nj);
    }
    let kappa_unit_columns = cond(&xu);
    let sv = singular_values(&xu);
    let kappa_frobenius_unit_columns = sv.iter().map(|s| s * s).sum::<f64>().sqrt()
        * sv.iter().map(|s| 1.0 / (s * s)).sum::<f64>().sqrt();
    let frobenius_intermediate = (n as f64).sqrt()
        * sys.separation.per_point_deltas.iter().map(|d| 1.0 / (d * d)).sum::<f64>().sqrt();
    let bound_n_over_delta = n as f64 / delta;
    let bound_delta6 = condition_bound_delta6(delta);
    let bound_rasmith = rasmith_adjusted(frobenius_intermediate, n);

    let g = gramian(zeros)?;
    let gn = op_norm(&g);
    let gramian_norm_sq = gn * gn;
    let gb = gramian_bound(delta);

    let slack = 1.0 + 1e-12;
    Ok(ConditionReport {
        n,
        delta,
        kappa_numeric,
        kappa_frobenius,
        kappa_unit_columns,
        kappa_frobenius_unit_columns,
        frobenius_intermediate,
        bound_n_over_delta,
        bound_delta6,
        bound_rasmith_adjusted: bound_rasmith,
        gramian_norm_sq,
        gramian_bound: gb,
        holds_delta6: kappa_numeric <= bound_delta6 * slack,
        holds_n_over_delta: kappa_unit_columns <= kappa_frobenius_unit_columns * slack
            && kappa_frobenius_unit_columns <= frobenius_intermediate * slack
            && frobenius_intermediate <= bound_n_over_delta * slack,
        holds_rasmith_adjusted: kappa_unit_columns <= bound_rasmith * (1.0 + 1e-7),
        holds_gramian: gramian_norm_sq <= gb * slack,
    })
}

/// Takenaka-Malmquist basis function `phi_k` (0-based) evaluated at `z`.
pub fn tm_basis(zeros: &[C64], k: usize, z: C64) -> C64 {
    let prefix: C64 = zeros[..k].iter().map(|&a| blaschke_factor(a, z)).product();
    prefix * defect(zeros[k]) / (1.0 - zeros[k].conj() * z)
}

/// An element of `K_Theta` written as `q(z) / prod_i (1 - conj(z_i) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVector {
    /// Coefficients `q_0, q_1, ...` of the numerator in increasing degree.
    pub numerator_coeffs: Vec<C64>,
    pub zeros: Vec<C64>,
}

impl ModelVector {
    pub fn new(numerator_coeffs: Vec<C64>, zeros: Vec<C64>) -> Result<Self> {
        if numerator_coeffs.len() > zeros.len() {
            return Err(CrxError::Input(format!(
                "numerator has {} coefficients but K_Theta has dimension {}",
                numerator_coeffs.len(),
                zeros.len()
            )));
        }
        Ok(ModelVector { numerator_coeffs, zeros })
    }

    pub fn eval(&self, z: C64) -> C64 {
        let q = self.numerator_coeffs.iter().rev().fold(C64::from(0.0), |acc, &c| acc * z + c);
        let den: C64 = self.zeros.iter().map(|&a| 1.0 - a.conj() * z).product();
        q / den
    }

    pub fn scaled(&self, s: C64) -> ModelVector {
        ModelVector {
            numerator_coeffs: self.numerator_coeffs.iter().map(|c| c * s).collect(),
            zeros: self.zeros.clone(),
        }
    }

    /// Coordinates in the Takenaka-Malmquist basis, from a least-squares fit on
    /// a `2n`-point circle grid.
    pub fn tm_coordinates(&self) -> CVec {
        let n = self.zeros.len();
        let m = 2 * n;
        let pts: Vec<C64> = (0..m)
            .map(|p| C64::from_polar(1.0, std::f64::consts::TAU * (p as f64 + 0.5) / m as f64))
            .collect();
        let e = DMatrix::from_fn(m, n, |p, k| tm_basis(&self.zeros, k, pts[p]));
        let rhs = CVec::from_iterator(m, pts.iter().map(|&w| self.eval(w)));
        e.svd(true, true).solve(&rhs, 1e-14).expect("SVD solve with U and V")
    }
}

/// `H^2` norm, as the Euclidean norm of the Takenaka-Malmquist coordinates.
pub fn model_vector_h2_norm(x: &ModelVector) -> f64 {
    x.tm_coordinates().norm()
}

fn poly_mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::from(0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Basis of the extremal vectors of `B(S_Theta)`: numerators
/// `z^s prod_j (1 - conj(a_j) z)` for `s = 0 .. n - J - 1`.
pub fn extremal_vector_basis(system: &ModelSpaceSystem, b: &BlaschkeProduct) -> Result<Vec<ModelVector>> {
    let n = system.dim();
    let j = b.degree();
    if j >= n {
        return Err(CrxError::DegreeTooLarge { degree: j, dim: n });
    }
    let base = b
        .roots()
        .iter()
        .fold(vec![C64::from(1.0)], |acc, a| poly_mul(&acc, &[C64::from(1.0), -a.conj()]));
    (0..n - j)
        .map(|s| {
            let mut coeffs = vec![C64::from(0.0); s];
            coeffs.extend_from_slice(&base);
            ModelVector::new(coeffs, system.raw_zeros())
        })
        .collect()
}
