//! Minimal-norm bounded interpolation on the disk via the Pick matrix.
//!
//! `min ||F||_inf` subject to `F(z_j) = w_j` is the smallest `lambda` for which
//! `[(lambda^2 - w_i conj(w_j)) / (1 - z_i conj(z_j))]` is positive semidefinite.

use serde::Serialize;

use crate::error::{CrxError, Result};
use crate::hyp_geometry::{check_distinct, earl_bound, separation_constant, DiskPoint};
use crate::linalg::{hermitian_eig, CMat, C64};

const PSD_THRESHOLD: f64 = -1e-12;
const BISECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    nodes: Vec<DiskPoint>,
    targets: Vec<C64>,
}

impl InterpolationProblem {
    pub fn new(nodes: Vec<DiskPoint>, targets: Vec<C64>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(CrxError::DimensionMismatch(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        if nodes.is_empty() {
            return Err(CrxError::Input("interpolation problem needs at least one node".into()));
        }
        let raw: Vec<C64> = nodes.iter().map(|p| p.value()).collect();
        check_distinct(&raw)?;
        Ok(InterpolationProblem { nodes, targets })
    }

    pub fn nodes(&self) -> &[DiskPoint] {
        &self.nodes
    }

    pub fn targets(&self) -> &[C64] {
        &self.targets
    }

    pub fn max_target(&self) -> f64 {
        self.targets.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }

    /// Pick matrix at level `lambda`.
    pub fn pick_matrix(&self, lambda: f64) -> CMat {
        let n = self.nodes.len();
        let l2 = lambda * lambda;
        CMat::from_fn(n, n, |i, j| {
            let zi = self.nodes[i].value();
            let zj = self.nodes[j].value();
            (C64::from(l2) - self.targets[i] * self.targets[j].conj()) / (1.0 - zj.conj() * zi)
        })
    }

    fn min_pick_eigenvalue(&self, lambda: f64) -> f64 {
        hermitian_eig(&self.pick_matrix(lambda)).0[0]
    }
}

/// Smallest sup-norm of a bounded holomorphic interpolant, by bisection on the
/// Pick criterion to absolute tolerance 1e-10.
pub fn minimal_interpolation_norm(problem: &InterpolationProblem) -> Result<f64> {
    let wmax = problem.max_target();
    if problem.nodes.len() == 1 || wmax == 0.0 {
        return Ok(wmax);
    }
    let sep = separation_constant(&problem.nodes)?;
    let mut lo = wmax * sep.delta;
    let mut hi = wmax * earl_bound(sep.delta)?;
    let feasible = |l: f64| problem.min_pick_eigenvalue(l) >= PSD_THRESHOLD;
    // guard the bracket against roundoff at its ends
    while !feasible(hi) {
        hi *= 2.0;
    }
    if feasible(lo) {
        return Ok(lo);
    }
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Serialize)]
pub struct EarlReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares the minimal interpolation norm with `M(delta_S) * max |w_j|`.
pub fn check_earl_inequality(problem: &InterpolationProblem) -> Result<EarlReport> {
    if problem.nodes.len() < 2 {
        return Err(CrxError::Input("Earl inequality check needs at least two nodes".into()));
    }
    let sep = separation_constant(&problem.nodes)?;
    let lhs = minimal_interpolation_norm(problem)?;
    let rhs = earl_bound(sep.delta)? * problem.max_target();
    Ok(EarlReport { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp_geometry::pseudo_distance_raw;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(nodes: &[C64], targets: &[C64]) -> InterpolationProblem {
        InterpolationProblem::new(DiskPoint::many(nodes).unwrap(), targets.to_vec()).unwrap()
    }

    /// Two-point oracle from Schwarz-Pick: the minimal norm is the smallest
    /// lambda >= max|w| with rho(w1/lambda, w2/lambda) <= rho(z1, z2).
    fn two_point_oracle(z: [C64; 2], w: [C64; 2]) -> f64 {
        let target = pseudo_distance_raw(z[0], z[1]);
        let wmax = w[0].norm().max(w[1].norm());
        let ok = |l: f64| {
            if l <= wmax {
                return false;
            }
            pseudo_distance_raw(w[0] / l, w[1] / l) <= target
        };
        let (mut lo, mut hi) = (wmax, wmax.max(1e-300) * 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid
            } else {
                lo = mid
            }
        }
        hi
    }

    #[test]
    fn one_point_and_constant_targets() {
        let w = c(0.3, -0.7);
        assert_eq!(minimal_interpolation_norm(&problem(&[c(0.4, 0.1)], &[w])).unwrap(), w.norm());
        let p = problem(&[c(0.0, 0.0), c(0.5, 0.0), c(-0.2, 0.6)], &[w, w, w]);
        assert!((minimal_interpolation_norm(&p).unwrap() - w.norm()).abs() < 1e-9);
        let rep = check_earl_inequality(&p).unwrap();
        assert!(rep.holds && rep.lhs <= rep.rhs);
    }

    #[test]
    fn z_over_half_problem() {
        // F(0)=0, F(1/2)=1/2 forces F = z G with G(1/2) = 1, so the minimum is 1.
        let p = problem(&[c(0.0, 0.0), c(0.5, 0.0)], &[c(0.0, 0.0), c(0.5, 0.0)]);
        let v = minimal_interpolation_norm(&p).unwrap();
        assert!((0.5..=1.0 + 1e-9).contains(&v));
        assert!((v - two_point_oracle([c(0.0, 0.0), c(0.5, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)])).abs() < 1e-9);
        // brute force over the degree-1 family s * b_a: F(0) = 0 forces a = 0, then s = 1
        let mut best = f64::INFINITY;
        for i in -40..=40 {
            for j in -40..=40 {
                let a = c(i as f64 / 45.0, j as f64 / 45.0);
                let b = |z: C64| (z - a) / (1.0 - a.conj() * z);
                let s = c(0.5, 0.0) / b(c(0.5, 0.0));
                if (s * b(c(0.0, 0.0))).norm() < 1e-12 {
                    best = best.min(s.norm());
                }
            }
        }
        assert!((v - best).abs() < 1e-9);
    }

    #[test]
    fn random_two_point_problems_match_schwarz_pick() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let z = [
                C64::from_polar(rng.random::<f64>() * 0.9, rng.random::<f64>() * 6.28),
                C64::from_polar(rng.random::<f64>() * 0.9, rng.random::<f64>() * 6.28),
            ];
            let w = [c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5), c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)];
            let v = minimal_interpolation_norm(&problem(&z, &w)).unwrap();
            assert!((v - two_point_oracle(z, w)).abs() < 1e-8, "{v}");
        }
    }

    #[test]
    fn scaling_and_feasibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.random_range(2..=6);
            let z: Vec<C64> = (0..n).map(|_| C64::from_polar(rng.random::<f64>().sqrt() * 0.95, rng.random::<f64>() * 6.28)).collect();
            let w: Vec<C64> = (0..n).map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)).collect();
            let p = problem(&z, &w);
            let v = minimal_interpolation_norm(&p).unwrap();
            let s = c(-1.3, 0.4);
            let ws: Vec<C64> = w.iter().map(|x| x * s).collect();
            let vs = minimal_interpolation_norm(&problem(&z, &ws)).unwrap();
            assert!((vs - s.norm() * v).abs() <= 1e-9 * (1.0 + vs), "{vs} vs {}", s.norm() * v);
            assert!(p.min_pick_eigenvalue(v + 1e-6) >= -1e-10);
        }
    }

    #[test]
    fn earl_holds_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.random_range(2..=6);
            let z: Vec<C64> = (0..n).map(|_| C64::from_polar(rng.random::<f64>().sqrt() * 0.95, rng.random::<f64>() * 6.28)).collect();
            let w: Vec<C64> = (0..n).map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)).collect();
            let rep = check_earl_inequality(&problem(&z, &w)).unwrap();
            assert!(rep.holds, "{rep:?}");
        }
    }

    #[test]
    fn well_separated_nodes_have_earl_ratio_near_one() {
        // two nodes near opposite points of the circle: delta close to 1
        let z = [c(0.99999, 0.0), c(-0.99999, 0.0)];
        let w = [c(0.8, 0.0), c(-0.3, 0.5)];
        let p = problem(&z, &w);
        let rep = check_earl_inequality(&p).unwrap();
        let ratio = rep.rhs / p.max_target();
        assert!(ratio < 1.001, "{ratio}");
        assert!(rep.holds);
    }

    #[test]
    fn rejects_mismatched_and_duplicate_input() {
        let nodes = DiskPoint::many(&[c(0.1, 0.0), c(0.1, 0.0)]).unwrap();
        assert!(matches!(InterpolationProblem::new(nodes.clone(), vec![c(1.0, 0.0); 2]), Err(CrxError::DuplicatePoint(..))));
        assert!(InterpolationProblem::new(nodes, vec![c(1.0, 0.0)]).is_err());
    }
}
