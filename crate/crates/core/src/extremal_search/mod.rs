//! Multistart search for Blaschke products maximizing `||B(Phi)||` or
//! `w(B(Phi))` with `Phi = phi(A)`, degree detection, extremal vectors and the
//! orthogonality identities they satisfy.

pub mod census;
pub mod optimizer;

use std::f64::consts::TAU;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::conformal_map::ConformalMap;
use crate::error::{CrxError, Result};
use crate::hyp_geometry::{blaschke_factorizations, eval_blaschke_matrix, BlaschkeProduct, DiskPoint};
use crate::io::{ser_complex_list, ser_matrix, ser_vector};
use crate::linalg::{
    eigenvalues, eye, hermitian_max, inner, op_norm, spectral_radius, top_singular, CMat, CVec, C64,
};
use crate::model_space::{extremal_vector_basis, ModelSpaceSystem};
use crate::numerical_range::numerical_radius_arg;

use optimizer::{ascent_gain, maximize, Settings};

/// `|alpha|` above this counts as a unimodular factor.
pub const DEGREE_THRESHOLD: f64 = 0.9999;
/// Cap on `|u|` in `alpha = u tanh|u| / |u|`; keeps `|alpha| < 1 - 1e-13`.
const U_CAP: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Norm,
    Radius,
}

impl FromStr for Mode {
    type Err = CrxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "norm" => Ok(Mode::Norm),
            "radius" => Ok(Mode::Radius),
            _ => Err(CrxError::Input(format!("mode must be norm or radius, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub starts: usize,
    pub seed: u64,
    /// First-order tolerance: no coordinate probe may gain more than this.
    pub tol: f64,
    /// Evaluation budget per start.
    pub max_evals: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { starts: 20, seed: 0, tol: 1e-7, max_evals: 20_000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    /// Largest orthogonality residual over all factor splits.
    pub orthogonality_residual: f64,
    /// Largest gain of the objective over `+-1e-4` probes of each root
    /// coordinate; 0 at a local maximum.
    pub local_optimality_gap: f64,
    pub starts_used: usize,
    pub converged: bool,
    pub evaluations: usize,
    pub winning_start: usize,
    pub start_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalResult {
    #[serde(serialize_with = "ser_matrix")]
    pub phi_of_a: CMat,
    #[serde(serialize_with = "ser_complex_list")]
    pub roots: Vec<C64>,
    /// Unimodular constant. In radius mode it rotates `<f(A) y, y>` onto the
    /// positive axis.
    pub constant: C64,
    pub attained: f64,
    #[serde(serialize_with = "ser_vector")]
    pub vector: CVec,
    pub effective_degree: usize,
    pub mode: Mode,
    pub degree: usize,
    pub diagnostics: Diagnostics,
}

impl ExtremalResult {
    pub fn blaschke(&self) -> BlaschkeProduct {
        let roots = DiskPoint::many(&self.roots).expect("optimizer roots lie in the open disk");
        BlaschkeProduct::new(roots, self.constant).expect("unimodular constant")
    }

    /// `f(Phi)` for the reported function.
    pub fn f_of_phi(&self) -> CMat {
        eval_blaschke_matrix(&self.roots, self.constant, &self.phi_of_a)
    }

    /// Re-evaluates the objective from the reported roots.
    pub fn reevaluate(&self) -> f64 {
        let f = self.f_of_phi();
        match self.mode {
            Mode::Norm => op_norm(&f),
            Mode::Radius => numerical_radius_arg(&f).0,
        }
    }
}

/// Number of roots with `|alpha| <= threshold`.
pub fn detect_degree(roots: &[C64], threshold: f64) -> usize {
    roots.iter().filter(|a| a.norm() <= threshold).count()
}

pub fn alpha_of(u: C64) -> C64 {
    let r = u.norm();
    if r == 0.0 {
        return u;
    }
    u * (r.min(U_CAP).tanh() / r)
}

pub fn u_of(alpha: C64) -> C64 {
    let r = alpha.norm();
    if r == 0.0 {
        return alpha;
    }
    alpha / r * r.min(U_CAP.tanh()).atanh()
}

fn roots_of(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|p| alpha_of(C64::new(p[0], p[1]))).collect()
}

fn params_of(roots: &[C64]) -> Vec<f64> {
    roots.iter().flat_map(|&a| {
        let u = u_of(a);
        [u.re, u.im]
    }).collect()
}

fn norm_objective(phi: &CMat, x: &[f64]) -> f64 {
    op_norm(&eval_blaschke_matrix(&roots_of(x), C64::from(1.0), phi))
}

fn radius_objective(phi: &CMat, x: &[f64]) -> f64 {
    numerical_radius_arg(&eval_blaschke_matrix(&roots_of(x), C64::from(1.0), phi)).0
}

/// `lambda_max(Re(e^{-i theta} B(Phi)))` with `theta` as the last parameter;
/// its maximum over all parameters is the maximal numerical radius.
fn radius_joint_objective(phi: &CMat, x: &[f64]) -> f64 {
    let (rt, theta) = x.split_at(x.len() - 1);
    let f = eval_blaschke_matrix(&roots_of(rt), C64::from(1.0), phi) * C64::from_polar(1.0, -theta[0]);
    let h = (&f + f.adjoint()) * C64::from(0.5);
    hermitian_max(&h).0
}

/// Start 0 uses the images `phi(sigma(A))` (the eigenvalues of `Phi`) of
/// smallest modulus; odd starts perturb a random subset of them, even starts
/// draw uniform points of the disk of radius 0.95.
fn initial_roots(images: &[C64], d: usize, seed: u64, k: usize) -> Vec<C64> {
    let mut sorted = images.to_vec();
    sorted.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    if k == 0 {
        return (0..d).map(|j| sorted[j % sorted.len()]).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    if k % 2 == 1 {
        let mut pool = images.to_vec();
        (0..d)
            .map(|_| {
                let base = if pool.is_empty() { C64::from(0.0) } else { pool.swap_remove(rng.random_range(0..pool.len())) };
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let z = base + C64::new(re, im) * 0.1;
                if z.norm() > 0.95 {
                    z / z.norm() * 0.95
                } else {
                    z
                }
            })
            .collect()
    } else {
        (0..d).map(|_| C64::from_polar(0.95 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())).collect()
    }
}

struct StartOutcome {
    x: Vec<f64>,
    value: f64,
    evaluations: usize,
}

fn run_search(phi: &CMat, d: usize, mode: Mode, config: &SearchConfig) -> (Vec<StartOutcome>, usize) {
    let images = eigenvalues(phi);
    let settings = Settings { max_evals: config.max_evals, ..Settings::default() };
    let starts = config.starts.max(1);
    let outcomes: Vec<StartOutcome> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut x0 = params_of(&initial_roots(&images, d, config.seed, k));
            let m = match mode {
                Mode::Norm => maximize(&|x: &[f64]| norm_objective(phi, x), &x0, &settings),
                Mode::Radius => {
                    let f0 = eval_blaschke_matrix(&roots_of(&x0), C64::from(1.0), phi);
                    x0.push(numerical_radius_arg(&f0).1);
                    let mut m = maximize(&|x: &[f64]| radius_joint_objective(phi, x), &x0, &settings);
                    m.x.pop();
                    m.value = radius_objective(phi, &m.x);
                    m
                }
            };
            StartOutcome { x: m.x, value: m.value, evaluations: m.evaluations }
        })
        .collect();
    // highest value wins, ties go to the lower start index
    let mut best = 0;
    for (k, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = k;
        }
    }
    (outcomes, best)
}

fn optimize(phi: &CMat, d: usize, mode: Mode, config: &SearchConfig) -> Result<ExtremalResult> {
    let n = phi.nrows();
    if d >= n.max(1) && d > 0 {
        return Err(CrxError::DegreeTooLarge { degree: d, dim: n });
    }
    let rho = spectral_radius(phi);
    if !(rho < 1.0) {
        return Err(CrxError::MapDomainMismatch);
    }
    let (outcomes, best) = run_search(phi, d, mode, config);
    let win = &outcomes[best];
    let roots = roots_of(&win.x);
    let f = eval_blaschke_matrix(&roots, C64::from(1.0), phi);
    let objective = |x: &[f64]| match mode {
        Mode::Norm => norm_objective(phi, x),
        Mode::Radius => radius_objective(phi, x),
    };
    let (attained, vector, constant) = match mode {
        Mode::Norm => {
            let (s, v) = top_singular(&f);
            (s, v, C64::from(1.0))
        }
        Mode::Radius => {
            let (w, theta) = numerical_radius_arg(&f);
            let rot = &f * C64::from_polar(1.0, -theta);
            let (_, y) = hermitian_max(&((&rot + rot.adjoint()) * C64::from(0.5)));
            let q = inner(&(&f * &y), &y);
            let gamma = if q.norm() > 0.0 { q.conj() / q.norm() } else { C64::from(1.0) };
            (w, y, gamma / gamma.norm())
        }
    };
    let gap = ascent_gain(&objective, &win.x, objective(&win.x), 1e-4);
    let mut result = ExtremalResult {
        phi_of_a: phi.clone(),
        effective_degree: detect_degree(&roots, DEGREE_THRESHOLD),
        roots,
        constant,
        attained,
        vector,
        mode,
        degree: d,
        diagnostics: Diagnostics {
            orthogonality_residual: 0.0,
            local_optimality_gap: gap,
            starts_used: outcomes.len(),
            converged: gap <= config.tol,
            evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
            winning_start: best,
            start_values: outcomes.iter().map(|o| o.value).collect(),
        },
    };
    result.diagnostics.orthogonality_residual =
        split_residuals(&result)?.into_iter().fold(0.0, f64::max);
    Ok(result)
}

/// Roots of a degree-`d` Blaschke product maximizing `||B(phi(A))||`.
pub fn optimize_norm(a: &CMat, map: &ConformalMap, d: usize, config: &SearchConfig) -> Result<ExtremalResult> {
    let phi = map.apply_to_matrix(a)?.value;
    optimize(&phi, d, Mode::Norm, config)
}

/// Roots of a degree-`d` Blaschke product maximizing `w(B(phi(A)))`.
pub fn optimize_radius(a: &CMat, map: &ConformalMap, d: usize, config: &SearchConfig) -> Result<ExtremalResult> {
    let phi = map.apply_to_matrix(a)?.value;
    optimize(&phi, d, Mode::Radius, config)
}

/// Same search with `Phi` given directly.
pub fn optimize_mapped(phi: &CMat, d: usize, mode: Mode, config: &SearchConfig) -> Result<ExtremalResult> {
    optimize(phi, d, mode, config)
}

fn check_split(result: &ExtremalResult, f1: &BlaschkeProduct, f2: &BlaschkeProduct) -> Result<()> {
    let f = result.blaschke();
    let ok = (0..16).all(|k| {
        let z = C64::from_polar(if k < 8 { 0.5 } else { 0.9 }, TAU * k as f64 / 8.0 + 0.1);
        (f1.eval(z) * f2.eval(z) - f.eval(z)).norm() <= 1e-10
    });
    if ok {
        Ok(())
    } else {
        Err(CrxError::FactorizationMismatch)
    }
}

/// `|<f1(A) x, (||f(A)||^2 I - f2(A)^* f2(A)) x>|` for a norm-mode result.
pub fn orthogonality_check(result: &ExtremalResult, f1: &BlaschkeProduct, f2: &BlaschkeProduct) -> Result<f64> {
    check_split(result, f1, f2)?;
    let phi = &result.phi_of_a;
    let x = &result.vector;
    let fa = result.f_of_phi();
    let s = op_norm(&fa);
    let g1 = f1.eval_matrix(phi);
    let g2 = f2.eval_matrix(phi);
    let n = phi.nrows();
    let rhs = (eye(n) * C64::from(s * s) - g2.adjoint() * &g2) * x;
    Ok(inner(&(g1 * x), &rhs).norm())
}

/// `|<f1(A) f(A) y, y> - <y, f2(A) y>|` for a radius-mode result.
pub fn w_orthogonality_check(result: &ExtremalResult, f1: &BlaschkeProduct, f2: &BlaschkeProduct) -> Result<f64> {
    check_split(result, f1, f2)?;
    let phi = &result.phi_of_a;
    let y = &result.vector;
    let fa = result.f_of_phi();
    let lhs = inner(&(f1.eval_matrix(phi) * fa * y), y);
    let rhs = inner(y, &(f2.eval_matrix(phi) * y));
    Ok((lhs - rhs).norm())
}

/// Residuals of the identity matching the result's mode over every split of
/// the root set.
pub fn split_residuals(result: &ExtremalResult) -> Result<Vec<f64>> {
    blaschke_factorizations(&result.blaschke())
        .iter()
        .map(|(f1, f2)| match result.mode {
            Mode::Norm => orthogonality_check(result, f1, f2),
            Mode::Radius => w_orthogonality_check(result, f1, f2),
        })
        .collect()
}

/// `|<f(A)^2 y, y> - 1|` at a radius-mode result.
pub fn w_square_residual(result: &ExtremalResult) -> f64 {
    let f = result.f_of_phi();
    let y = &result.vector;
    (inner(&(&f * &f * y), y) - 1.0).norm()
}

#[derive(Debug, Clone, Serialize)]
pub struct SThetaReport {
    pub dim: usize,
    pub degree: usize,
    pub norm: f64,
    pub norm_ok: bool,
    pub subspace_dim: usize,
    /// `||B(S_Theta) x|| / ||x||` for each basis vector of the extremal subspace.
    pub basis_ratios: Vec<f64>,
    pub basis_ok: bool,
    /// `None` when the extremal subspace is the whole space.
    pub complement_ratio: Option<f64>,
    pub complement_ok: bool,
}

impl SThetaReport {
    pub fn passed(&self) -> bool {
        self.norm_ok && self.basis_ok && self.complement_ok
    }
}

/// Checks `||B(S_Theta)|| = 1`, that the characterized extremal vectors attain
/// it, and that a seeded random vector orthogonal to them does not.
pub fn s_theta_extremal_suite(system: &ModelSpaceSystem, b: &BlaschkeProduct, seed: u64) -> Result<SThetaReport> {
    let n = system.dim();
    let basis = extremal_vector_basis(system, b)?;
    let l = system.shift_tm();
    let bl = b.eval_matrix(&l);
    let norm = op_norm(&bl);
    let coords: Vec<CVec> = basis.iter().map(|v| v.tm_coordinates()).collect();
    let basis_ratios: Vec<f64> = coords.iter().map(|c| (&bl * c).norm() / c.norm()).collect();

    // orthonormalize the extremal subspace, then project it out of a random vector
    let mut q: Vec<CVec> = Vec::new();
    for c in &coords {
        let mut v = c.clone();
        for e in &q {
            v -= e * inner(&v, e);
        }
        let nv = v.norm();
        q.push(v / C64::from(nv));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = CVec::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    for e in &q {
        x -= e * inner(&x, e);
    }
    let complement_ratio = (q.len() < n).then(|| (&bl * &x).norm() / x.norm());
    Ok(SThetaReport {
        dim: n,
        degree: b.degree(),
        norm,
        norm_ok: (norm - 1.0).abs() <= 1e-8,
        subspace_dim: coords.len(),
        basis_ok: basis_ratios.iter().all(|r| (r - 1.0).abs() <= 1e-8),
        basis_ratios,
        complement_ok: complement_ratio.is_none_or(|r| r < 1.0 - 1e-6),
        complement_ratio,
    })
}
