//! The acceptance criteria as runnable checks, grouped by module suite.

use std::f64::consts::{SQRT_2, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boundary_measures::{moment_check, mu_density, representation_check, w_measure_check, Grid, TestFunction};
use crate::conformal_map::{build_map, ConformalMap, MapKind, MapOverride};
use crate::error::{CrxError, Result};
use crate::extremal_search::census::{census_matrix, degree_census, degree_fraction, write_census_csv};
use crate::extremal_search::{
    detect_degree, optimize_mapped, s_theta_extremal_suite, split_residuals, w_square_residual, ExtremalResult, Mode,
    SearchConfig, DEGREE_THRESHOLD,
};
use crate::hyp_geometry::{earl_bound, separation_constant, BlaschkeProduct, DiskPoint};
use crate::linalg::{c, cond, eigenvalues, from_rows, op_norm, random_complex_gaussian, CMat, C64};
use crate::matrix_functions::{
    boundary_sup, crabb_matrix, crouzeix_ratio, li_matrix, stronger_conjecture_check, Polynomial,
};
use crate::model_space::{condition_report, lemma_tech_check, ModelSpaceSystem};
use crate::numerical_range::{numerical_radius, range_boundary, DomainBoundary, DEFAULT_NODES};
use crate::pick_oracle::{check_earl_inequality, InterpolationProblem};
use crate::pipeline::prepare;

pub const SUITES: [&str; 6] =
    ["hyp_geometry", "model_space", "extremal_search", "boundary_measures", "matrix_functions", "conformal_map"];

const CRITERIA: [(u8, &str, &str); 12] = [
    (1, "hyp_geometry", "Earl bound values"),
    (2, "model_space", "eigenvector formulas"),
    (3, "model_space", "telescoping lemma"),
    (4, "model_space", "condition and Gramian bounds"),
    (5, "model_space", "norm and extremal vectors of B(S_Theta)"),
    (6, "extremal_search", "Crabb benchmark"),
    (7, "extremal_search", "Li benchmark"),
    (8, "extremal_search", "orthogonality identities"),
    (9, "boundary_measures", "representation measures"),
    (10, "matrix_functions", "global inequalities"),
    (11, "extremal_search", "degree census"),
    (12, "conformal_map", "conformal maps"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub runtime_s: f64,
    pub failures: Vec<String>,
    /// Reported observations that do not decide the criterion.
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] criterion {:>2} ({}): {} [{} checks, {:.2} s]",
            self.id, self.suite, self.name, self.checks, self.runtime_s
        );
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(" first failure: {f}"));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub all_passed: bool,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub suite: Option<String>,
    /// Criterion whose first check gets a bound it cannot meet.
    pub inject_failure: Option<u8>,
}

/// Collects the checks of one criterion.
struct Checker {
    inject: bool,
    count: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checker {
    fn new(inject: bool) -> Self {
        Checker { inject, count: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn le(&mut self, what: impl Into<String>, value: f64, bound: f64) {
        let what = what.into();
        let bound = if self.inject && self.count == 0 { value - 1.0 } else { bound };
        self.count += 1;
        if !(value <= bound) {
            self.failures.push(format!("{what}: {value:e} > {bound:e}"));
        }
    }

    fn ge(&mut self, what: impl Into<String>, value: f64, bound: f64) {
        self.le(what, -value, -bound);
    }

    fn truth(&mut self, what: impl Into<String>, ok: bool) {
        self.le(what, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.count += 1;
        self.failures.push(what.into());
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

/// Runs every criterion of the selected suite (all by default).
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport> {
    if let Some(s) = &opts.suite {
        if !SUITES.contains(&s.as_str()) {
            return Err(CrxError::Input(format!("unknown suite {s:?}; expected one of {}", SUITES.join(", "))));
        }
    }
    if let Some(k) = opts.inject_failure {
        if !(1..=12).contains(&k) {
            return Err(CrxError::Input(format!("criterion {k} does not exist")));
        }
    }
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .filter(|(_, suite, _)| opts.suite.as_deref().is_none_or(|s| s == *suite))
        .map(|&(id, _, _)| run_criterion(id, opts.inject_failure == Some(id)))
        .collect();
    Ok(VerifyReport { all_passed: criteria.iter().all(|c| c.passed), criteria })
}

pub fn run_criterion(id: u8, inject: bool) -> CriterionResult {
    let (_, suite, name) = CRITERIA[(id - 1) as usize];
    let mut chk = Checker::new(inject);
    let t0 = Instant::now();
    match id {
        1 => c01_earl(&mut chk),
        2 => c02_eigenvectors(&mut chk),
        3 => c03_lemma(&mut chk),
        4 => c04_bounds(&mut chk),
        5 => c05_s_theta(&mut chk),
        6 => c06_crabb(&mut chk),
        7 => c07_li(&mut chk),
        8 => c08_orthogonality(&mut chk),
        9 => c09_measures(&mut chk),
        10 => c10_inequalities(&mut chk),
        11 => c11_census(&mut chk),
        12 => c12_conformal(&mut chk),
        _ => unreachable!("criterion ids are 1..=12"),
    }
    CriterionResult {
        id,
        suite,
        name,
        passed: chk.failures.is_empty(),
        checks: chk.count,
        runtime_s: t0.elapsed().as_secs_f64(),
        failures: chk.failures,
        notes: chk.notes,
    }
}

/// Zero set of size `n` with separation at least `min_delta`: jittered
/// angles around the circle and random radii, redrawn until separated.
pub fn seeded_zero_set(rng: &mut ChaCha8Rng, n: usize, min_delta: f64) -> Vec<DiskPoint> {
    loop {
        let v: Vec<C64> = (0..n)
            .map(|k| {
                let t = TAU * (k as f64 + 0.4 * (rng.random::<f64>() - 0.5)) / n as f64;
                C64::from_polar(0.05 + 0.85 * rng.random::<f64>(), t)
            })
            .collect();
        let z = DiskPoint::many(&v).expect("radii below 0.9");
        if separation_constant(&z).map(|s| s.delta >= min_delta).unwrap_or(false) {
            return z;
        }
    }
}

/// The 50 zero sets shared by criteria 2 and 4: `n = 2 + i mod 7`.
pub fn criterion_zero_sets() -> Vec<Vec<DiskPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..50).map(|i| seeded_zero_set(&mut rng, 2 + i % 7, 0.05)).collect()
}

fn c01_earl(chk: &mut Checker) {
    let t0 = Instant::now();
    let m = earl_bound(2.0 * SQRT_2 / 3.0);
    let one = earl_bound(1.0);
    let dt = t0.elapsed().as_secs_f64();
    match (m, one) {
        (Ok(m), Ok(one)) => {
            chk.le("|M(2 sqrt2 / 3) - 2|", (m - 2.0).abs(), 1e-12);
            chk.truth(format!("M(1) == 1 exactly (got {one:e})"), one == 1.0);
        }
        _ => chk.fail("earl_bound rejected a valid delta"),
    }
    chk.le("runtime (s)", dt, 1e-3);
}

fn c02_eigenvectors(chk: &mut Checker) {
    let t0 = Instant::now();
    for (i, z) in criterion_zero_sets().into_iter().enumerate() {
        let sys = match ModelSpaceSystem::new(z) {
            Ok(s) => s,
            Err(e) => {
                chk.fail(format!("zero set {i}: {e}"));
                continue;
            }
        };
        let xf = crate::linalg::frobenius(&sys.x_mat);
        chk.le(format!("set {i}: ||M X - X L||_F / ||X||_F"), sys.eigen_residual() / xf, 1e-9);
        chk.le(format!("set {i}: ||X^-1 X - I||_F / kappa"), sys.inverse_residual() / cond(&sys.x_mat), 1e-8);
    }
    chk.le("runtime (s)", t0.elapsed().as_secs_f64(), 1.0);
}

fn c03_lemma(chk: &mut Checker) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Vec<C64>, C64)> = (0..500)
        .map(|_| {
            let m = rng.random_range(1..=6);
            let a = (0..m).map(|_| C64::from_polar(0.99 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())).collect();
            let b = C64::from_polar(0.99 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>());
            (a, b)
        })
        .collect();
    let t0 = Instant::now();
    let worst = cases
        .iter()
        .map(|(a, b)| {
            let (_, rhs, diff) = lemma_tech_check(a, *b);
            diff / rhs.norm()
        })
        .fold(0.0, f64::max);
    let dt = t0.elapsed().as_secs_f64();
    chk.le("max relative error over 500 instances", worst, 1e-12);
    chk.le("runtime (s)", dt, 0.1);
}

fn c04_bounds(chk: &mut Checker) {
    for (i, z) in criterion_zero_sets().into_iter().enumerate() {
        match condition_report(&z) {
            Ok(r) => {
                chk.le(format!("set {i}: kappa / (8/d^6)(1-2 ln d)"), r.kappa_numeric / r.bound_delta6, 1.0 + 1e-12);
                chk.le(format!("set {i}: ||G||^2 / (2/d^4)(1-2 ln d)"), r.gramian_norm_sq / r.gramian_bound, 1.0 + 1e-12);
                chk.truth(format!("set {i}: kappa <= Frobenius chain <= n/delta"), r.holds_n_over_delta);
                if !r.holds_rasmith_adjusted {
                    chk.note(format!("set {i}: refined bound exceeded ({} > {})", r.kappa_unit_columns, r.bound_rasmith_adjusted));
                }
            }
            Err(e) => chk.fail(format!("set {i}: {e}")),
        }
    }
}

fn random_roots(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| C64::from_polar(0.9 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())).collect()
}

fn c05_s_theta(chk: &mut Checker) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let n = rng.random_range(2..=6);
        let zeros = seeded_zero_set(&mut rng, n, 0.05);
        let d = rng.random_range(0..n);
        let b = BlaschkeProduct::from_roots(&random_roots(&mut rng, d)).expect("roots inside the disk");
        let sys = match ModelSpaceSystem::new(zeros) {
            Ok(s) => s,
            Err(e) => {
                chk.fail(format!("pair {i}: {e}"));
                continue;
            }
        };
        match s_theta_extremal_suite(&sys, &b, 500 + i) {
            Ok(r) => {
                chk.le(format!("pair {i} (n={n}, deg={d}): | ||B(S)|| - 1 |"), (r.norm - 1.0).abs(), 1e-8);
                let worst = r.basis_ratios.iter().map(|q| (q - 1.0).abs()).fold(0.0, f64::max);
                chk.le(format!("pair {i}: basis vectors attain the norm"), worst, 1e-8);
                match r.complement_ratio {
                    Some(q) => chk.le(format!("pair {i}: complement ratio"), q, 1.0 - 1e-6),
                    None => chk.note(format!("pair {i}: B is constant, no complement")),
                }
            }
            Err(e) => chk.fail(format!("pair {i}: {e}")),
        }
    }
}

fn config(seed: u64) -> SearchConfig {
    SearchConfig { seed, ..SearchConfig::default() }
}

fn norm_search(a: &CMat, ov: MapOverride, d: usize, seed: u64) -> Result<ExtremalResult> {
    let prep = prepare(a, DEFAULT_NODES, ov)?;
    optimize_mapped(prep.phi(), d, Mode::Norm, &config(seed))
}

fn c06_crabb(chk: &mut Checker) {
    for n in 3..=5 {
        let cm = crabb_matrix(n);
        chk.le(format!("n={n}: | ||C^(n-1)|| - 2 |"), (op_norm(&cm.pow((n - 1) as u32)) - 2.0).abs(), 1e-12);
        let t0 = Instant::now();
        match norm_search(&cm, MapOverride::Identity, n - 1, 42) {
            Ok(r) => {
                let dt = t0.elapsed().as_secs_f64();
                chk.le(format!("n={n}: |attained - 2|"), (r.attained - 2.0).abs(), 1e-6);
                chk.le(format!("n={n}: max |alpha|"), r.roots.iter().map(|z| z.norm()).fold(0.0, f64::max), 1e-3);
                chk.truth(format!("n={n}: effective degree {} == {}", r.effective_degree, n - 1), r.effective_degree == n - 1);
                if n == 5 {
                    chk.le("n=5 runtime (s)", dt, 30.0);
                }
            }
            Err(e) => chk.fail(format!("n={n}: {e}")),
        }
    }
}

/// `sqrt(1 + (1 - t)^2) / 2`
pub fn li_radius(t: f64) -> f64 {
    (1.0 + (1.0 - t) * (1.0 - t)).sqrt() / 2.0
}

fn c07_li(chk: &mut Checker) {
    for t in [0.0, 0.2, 0.6] {
        chk.le(format!("t={t}: |w(A) - r(t)|"), (numerical_radius(&li_matrix(t)) - li_radius(t)).abs(), 1e-8);
    }
    match norm_search(&li_matrix(0.6), MapOverride::Auto, 2, 42) {
        Ok(r) => {
            chk.truth(format!("t=0.6: effective degree {} == 1", r.effective_degree), r.effective_degree == 1);
            let inner = r.roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            chk.le("t=0.6: |interior root|", inner, 1e-3);
        }
        Err(e) => chk.fail(format!("t=0.6: {e}")),
    }
    match norm_search(&li_matrix(0.2), MapOverride::Auto, 2, 42) {
        Ok(r) => {
            chk.truth(format!("t=0.2: effective degree {} == 2", r.effective_degree), r.effective_degree == 2);
            chk.le("t=0.2: max |root|", r.roots.iter().map(|z| z.norm()).fold(0.0, f64::max), 1e-3);
        }
        Err(e) => chk.fail(format!("t=0.2: {e}")),
    }
    let t = 1.0 - 1.0 / 3f64.sqrt();
    match (norm_search(&li_matrix(t), MapOverride::Auto, 1, 42), norm_search(&li_matrix(t), MapOverride::Auto, 2, 42)) {
        (Ok(r1), Ok(r2)) => {
            chk.le("t=1-1/sqrt3: |degree-1 optimum - degree-2 optimum|", (r1.attained - r2.attained).abs(), 1e-5)
        }
        (Err(e), _) | (_, Err(e)) => chk.fail(format!("t=1-1/sqrt3: {e}")),
    }
}

fn jordan2() -> CMat {
    from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
}

/// Norm-mode optima used by criteria 8 and 9.
fn norm_optima() -> Vec<(String, CMat, MapOverride, usize)> {
    let mut v = Vec::new();
    for n in 3..=5 {
        v.push((format!("crabb {n}"), crabb_matrix(n), MapOverride::Identity, n - 1));
    }
    v.push(("li 0.2".into(), li_matrix(0.2), MapOverride::Auto, 2));
    for i in 0..5 {
        v.push((format!("census dim 3 seed 7 sample {i}"), census_matrix(3, 7, i), MapOverride::Auto, 2));
    }
    v
}

fn radius_optima() -> Vec<(String, CMat, MapOverride, usize)> {
    vec![
        ("crabb 3".into(), crabb_matrix(3), MapOverride::Identity, 2),
        ("crabb 4".into(), crabb_matrix(4), MapOverride::Identity, 3),
        ("jordan 2".into(), jordan2(), MapOverride::Scale(0.5), 1),
    ]
}

fn c08_orthogonality(chk: &mut Checker) {
    for (name, a, ov, d) in norm_optima() {
        match norm_search(&a, ov, d, 42) {
            Ok(r) if r.diagnostics.converged && r.attained > 1.0 + 1e-3 => match split_residuals(&r) {
                Ok(res) => chk.le(
                    format!("{name}: max orthogonality residual over {} splits", res.len()),
                    res.into_iter().fold(0.0, f64::max),
                    1e-5,
                ),
                Err(e) => chk.fail(format!("{name}: {e}")),
            },
            Ok(r) => chk.note(format!("{name}: skipped (attained {}, converged {})", r.attained, r.diagnostics.converged)),
            Err(e) => chk.fail(format!("{name}: {e}")),
        }
    }
    for (name, a, ov, d) in radius_optima() {
        let run = || -> Result<ExtremalResult> {
            let prep = prepare(&a, DEFAULT_NODES, ov)?;
            optimize_mapped(prep.phi(), d, Mode::Radius, &config(42))
        };
        match run() {
            Ok(r) => {
                chk.le(format!("{name}: |<f(A)^2 y, y> - 1|"), w_square_residual(&r), 1e-5);
                chk.le(format!("{name}: max split residual"), r.diagnostics.orthogonality_residual, 1e-5);
            }
            Err(e) => chk.fail(format!("{name}: {e}")),
        }
    }
}

fn c09_measures(chk: &mut Checker) {
    for (name, a, ov, d) in norm_optima().into_iter().filter(|o| !o.0.starts_with("crabb 4")) {
        let run = || -> Result<_> {
            let prep = prepare(&a, DEFAULT_NODES, ov)?;
            let r = optimize_mapped(prep.phi(), d, Mode::Norm, &config(42))?;
            let dens = mu_density(&r.phi_of_a, &r.vector, &prep.map)?;
            Ok((prep, r, dens))
        };
        match run() {
            Ok((prep, r, dens)) => {
                chk.le(format!("{name}: |total mass - 1|"), (dens.total_mass - 1.0).abs(), 1e-8);
                chk.ge(format!("{name}: min rho"), dens.min_rho(), -1e-6);
                chk.le(format!("{name}: moments n <= 10"), moment_check(&dens, &r.phi_of_a, &r.vector, 10), 1e-8);
                let rep = representation_check(&dens, &prep.a, &r.phi_of_a, &r.vector, &TestFunction::default_set(), Some(&r));
                chk.note(format!("{name}: representation deviation {:e}", rep.max_deviation));
                if r.attained > 1.0 + 1e-3 {
                    chk.le(format!("{name}: |int f dmu|"), rep.f_integral_abs.unwrap_or(f64::NAN), 1e-5);
                }
            }
            Err(e) => chk.fail(format!("{name}: {e}")),
        }
    }
    for (name, a, ov, d) in radius_optima() {
        let run = || -> Result<_> {
            let prep = prepare(&a, DEFAULT_NODES, ov)?;
            let r = optimize_mapped(prep.phi(), d, Mode::Radius, &config(42))?;
            w_measure_check(&r, &Grid::boundary(&prep.map))
        };
        match run() {
            Ok(rep) => {
                chk.le(format!("{name}: |nu(boundary) - w(f(A))|"), rep.mass_error, 1e-6);
                chk.le(format!("{name}: |int f dnu - 1|"), rep.f_integral_error, 1e-5);
                chk.note(format!("{name}: min nu density {:e}", rep.min_density));
            }
            Err(e) => chk.fail(format!("{name}: {e}")),
        }
    }
}

fn random_contraction(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = random_complex_gaussian(rng, n);
    let s = op_norm(&a);
    a / C64::from(s * 1.0001)
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> Polynomial {
    Polynomial::new((0..=deg).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect())
}

fn c10_inequalities(chk: &mut Checker) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let circle = DomainBoundary::circle(c(0.0, 0.0), 1.0, 512);
    let mut worst_vn = f64::NEG_INFINITY;
    for _ in 0..100 {
        let n = rng.random_range(2..=5);
        let a = random_contraction(&mut rng, n);
        let deg = rng.random_range(1..=5);
        let p = random_poly(&mut rng, deg);
        worst_vn = worst_vn.max(op_norm(&p.eval_matrix(&a)) - boundary_sup(|z| p.eval(z), &circle));
    }
    chk.le("von Neumann: max ||p(A)|| - sup |p|", worst_vn, 1e-8);

    let (mut tested, mut worst_earl) = (0, f64::NEG_INFINITY);
    while tested < 40 {
        let n = rng.random_range(2..=4);
        let a = random_contraction(&mut rng, n);
        let ev = eigenvalues(&a);
        let Ok(pts) = DiskPoint::many(&ev) else { continue };
        let Ok(sep) = separation_constant(&pts) else { continue };
        if sep.delta < 0.05 {
            continue;
        }
        let d = rng.random_range(1..=3);
        let b = BlaschkeProduct::from_roots(&random_roots(&mut rng, d)).expect("roots inside the disk");
        let max_spec = ev.iter().map(|&l| b.eval(l).norm()).fold(0.0, f64::max);
        let bound = earl_bound(sep.delta).expect("delta in (0, 1]") * max_spec;
        worst_earl = worst_earl.max(op_norm(&b.eval_matrix(&a)) - bound);
        tested += 1;
    }
    chk.le("separated contractions: max ||f(A)|| - M(delta_A) max |f(sigma)|", worst_earl, 1e-7);

    let mut worst_pick = f64::NEG_INFINITY;
    let mut solved = 0;
    while solved < 200 {
        let n = rng.random_range(2..=5);
        let nodes: Vec<C64> = random_roots(&mut rng, n);
        let targets: Vec<C64> = (0..n).map(|_| C64::from_polar(rng.random::<f64>(), TAU * rng.random::<f64>())).collect();
        let Ok(pts) = DiskPoint::many(&nodes) else { continue };
        let Ok(problem) = InterpolationProblem::new(pts, targets) else { continue };
        match check_earl_inequality(&problem) {
            Ok(rep) => worst_pick = worst_pick.max(rep.lhs - rep.rhs),
            Err(CrxError::SeparationTooSmall(_)) => continue,
            Err(e) => chk.fail(format!("Pick problem: {e}")),
        }
        solved += 1;
    }
    chk.le("200 Pick problems: max minimal norm - M(delta) max |w|", worst_pick, 1e-9);

    let cp = 1.0 + SQRT_2;
    let (mut worst_ratio, mut tested, mut skipped) = (0.0f64, 0, 0);
    let mut cp_fail = 0;
    let mut strong_fail = 0;
    while tested < 30 {
        let a = random_complex_gaussian(&mut rng, 3);
        let deg = rng.random_range(1..=4);
        let p = random_poly(&mut rng, deg);
        let Ok(bnd) = range_boundary(&a, DEFAULT_NODES) else {
            skipped += 1;
            continue;
        };
        let fvals: Vec<C64> = bnd.nodes.iter().map(|&z| p.eval(z)).collect();
        match (crouzeix_ratio(&p.eval_matrix(&a), |z| p.eval(z), &bnd), stronger_conjecture_check(&fvals, &a, &bnd)) {
            (Ok(r), Ok(s)) => {
                worst_ratio = worst_ratio.max(r);
                cp_fail += usize::from(!s.holds_cp);
                strong_fail += usize::from(!s.holds_strong);
                tested += 1;
            }
            _ => skipped += 1,
        }
    }
    chk.le("random 3x3 suite: max Crouzeix ratio", worst_ratio, cp + 1e-6);
    chk.truth(format!("random 3x3 suite: two-sided check holds ({cp_fail} failures)"), cp_fail == 0);
    chk.note(format!("random 3x3 suite: {tested} cases, {skipped} skipped, max ratio {worst_ratio:.6}"));
    if worst_ratio > 2.0 + 1e-6 {
        chk.note(format!("!!! CONJECTURE VIOLATION: Crouzeix ratio {worst_ratio} exceeds 2"));
    }
    if strong_fail > 0 {
        chk.note(format!("!!! STRONGER INEQUALITY VIOLATED in {strong_fail} cases"));
    }
}

fn census_csv(n: usize, samples: usize, seed: u64, cfg: &SearchConfig) -> (Vec<crate::extremal_search::census::CensusRow>, Vec<u8>) {
    let rows = degree_census(n, samples, seed, DEFAULT_NODES, cfg);
    let mut buf = Vec::new();
    write_census_csv(&rows, &mut buf).expect("writing to memory");
    (rows, buf)
}

fn c11_census(chk: &mut Checker) {
    let t0 = Instant::now();
    let cfg = SearchConfig::default();
    let cp = 1.0 + SQRT_2;
    for (n, degree, bound, at_least) in [(3usize, 2usize, 0.6, true), (5, 4, 0.1, false)] {
        let (rows, _) = census_csv(n, 50, 7, &cfg);
        let frac = degree_fraction(&rows, degree);
        let failed = rows.iter().filter(|r| r.error.is_some()).count();
        // rows that failed count against the share
        let share = frac * (rows.len() - failed) as f64 / rows.len() as f64;
        if at_least {
            chk.ge(format!("dim {n}: share of degree {degree}"), share, bound);
        } else {
            chk.le(format!("dim {n}: share of degree {degree}"), frac, bound);
        }
        let worst = rows.iter().filter_map(|r| r.crouzeix_ratio).fold(0.0, f64::max);
        chk.le(format!("dim {n}: max Crouzeix ratio"), worst, cp + 1e-6);
        let degrees_ok = rows.iter().filter_map(|r| r.effective_degree).all(|d| d < n);
        chk.truth(format!("dim {n}: effective degrees within [0, n-1]"), degrees_ok);
        let hist: Vec<String> = (0..n).map(|d| format!("{d}:{:.0}%", 100.0 * degree_fraction(&rows, d))).collect();
        chk.note(format!("dim {n}: degree shares {} with {failed} failed rows", hist.join(" ")));
    }
    let (_, a) = census_csv(3, 10, 1, &cfg);
    let (_, b) = census_csv(3, 10, 1, &cfg);
    chk.truth("census CSV byte-identical across runs", a == b);
    chk.le("runtime (s)", t0.elapsed().as_secs_f64(), 600.0);
}

fn c12_conformal(chk: &mut Checker) {
    let routes = [
        (DomainBoundary::circle(c(0.0, 0.0), 1.0, 128), c(0.0, 0.0), "identity"),
        (DomainBoundary::circle(c(0.0, 0.0), 0.7, 128), c(0.0, 0.0), "scale"),
        (DomainBoundary::circle(c(0.3, -0.2), 1.5, 128), c(0.5, 0.0), "moebius"),
    ];
    for (b, center, want) in routes {
        match build_map(&b, center) {
            Ok(m) => {
                let got = match m.kind {
                    MapKind::Identity => "identity",
                    MapKind::Scale { .. } => "scale",
                    MapKind::Moebius { .. } => "moebius",
                    MapKind::Numeric => "numeric",
                };
                chk.truth(format!("circle routes to {want} (got {got})"), got == want);
            }
            Err(e) => chk.fail(format!("circle map: {e}")),
        }
    }
    match prepare(&crabb_matrix(3), DEFAULT_NODES, MapOverride::Auto) {
        Ok(p) => chk.truth("W(crabb 3) routes to an exact map", p.map.is_exact()),
        Err(e) => chk.fail(format!("crabb range map: {e}")),
    }

    let m = DEFAULT_NODES;
    let ellipse = |m: usize| build_map(&DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, m), c(0.0, 0.0));
    match (ellipse(m), ellipse(2 * m)) {
        (Ok(e1), Ok(e2)) => {
            let modulus = e1.boundary_values.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
            chk.le("ellipse: max ||phi(zeta)| - 1|", modulus, 1e-6);
            let mut comp = 0.0f64;
            let mut stab = 0.0f64;
            for k in 0..24 {
                let w = C64::from_polar(0.8 * ((k % 4) as f64 + 1.0) / 4.0, TAU * k as f64 / 24.0);
                match e1.inverse(w).and_then(|z| e1.eval(z).map(|v| (z, v))) {
                    Ok((z, v)) => {
                        comp = comp.max((v - w).norm());
                        if let Ok(v2) = e2.eval(z) {
                            stab = stab.max((v2 - v).norm());
                        }
                    }
                    Err(e) => chk.fail(format!("ellipse composition at {w}: {e}")),
                }
            }
            chk.le("ellipse: max |phi(phi^-1(w)) - w|", comp, 1e-6);
            chk.le("ellipse: max |phi_m - phi_2m|", stab, 1e-6);
            // independent closed form: sqrt(k) sn((2K/pi) asin(z/c), k), c = 0.8
            let reference = [(c(0.5, 0.0), c(0.638_980_213_806_505_96, 0.0)), (c(0.0, 0.3), c(0.0, 0.440_261_655_120_631_36))];
            for (z, want) in reference {
                match e1.eval(z) {
                    Ok(v) => chk.le(format!("ellipse: |phi({z}) - elliptic reference|"), (v - want).norm(), 1e-6),
                    Err(e) => chk.fail(format!("ellipse eval: {e}")),
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => chk.fail(format!("ellipse map: {e}")),
    }
    let _ = ConformalMap::identity(16);
}

/// Apparent degree rule applied to a root list; exposed for the report.
pub fn apparent_degree(roots: &[C64]) -> usize {
    detect_degree(roots, DEGREE_THRESHOLD)
}
