//! `f(A)` by eigendecomposition or by the resolvent Cauchy integral, the
//! Cauchy transform of conjugate boundary data, Crouzeix ratios and the
//! benchmark matrices.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CrxError, Result};
use crate::hyp_geometry::BlaschkeProduct;
use crate::linalg::{cond, eig, eigenvalues, frobenius, inverse, op_norm, tree_sum, CMat, C64, I};
use crate::numerical_range::DomainBoundary;
use crate::spectral;

pub const MAX_EIGENBASIS_COND: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Exact,
    Diagonalization,
    Contour,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixFunctionResult {
    #[serde(skip)]
    pub value: CMat,
    pub route: Route,
    /// Frobenius distance between the two routes when both ran.
    pub route_agreement: Option<f64>,
}

impl MatrixFunctionResult {
    pub fn exact(value: CMat) -> Self {
        MatrixFunctionResult { value, route: Route::Exact, route_agreement: None }
    }
}

/// `X f(Lambda) X^{-1}` from a numerical eigendecomposition.
pub fn apply_function_diag<F>(f: F, a: &CMat) -> Result<MatrixFunctionResult>
where
    F: Fn(C64) -> Result<C64>,
{
    let (vals, x) = eig(a);
    let kappa = cond(&x);
    if !(kappa <= MAX_EIGENBASIS_COND) {
        return Err(CrxError::IllConditionedEigenbasis(kappa));
    }
    let xi = inverse(&x).ok_or(CrxError::IllConditionedEigenbasis(f64::INFINITY))?;
    let n = vals.len();
    let mut xf = x;
    for j in 0..n {
        let fj = f(vals[j])?;
        for i in 0..n {
            xf[(i, j)] *= fj;
        }
    }
    Ok(MatrixFunctionResult { value: xf * xi, route: Route::Diagonalization, route_agreement: None })
}

/// Trapezoid rule for `(1/2 pi i) \oint f(zeta) (zeta I - A)^{-1} d zeta` over
/// the boundary nodes.
pub fn apply_function_contour(fvals: &[C64], a: &CMat, boundary: &DomainBoundary) -> Result<MatrixFunctionResult> {
    let m = boundary.len();
    if fvals.len() != m {
        return Err(CrxError::DimensionMismatch(format!("{} function values for {m} nodes", fvals.len())));
    }
    let spec = eigenvalues(a);
    let margin = spec.iter().map(|&z| boundary.signed_distance(z)).fold(f64::INFINITY, f64::min);
    if margin < 2.0 * boundary.spacing() {
        return Err(CrxError::SpectrumTooCloseToBoundary(margin));
    }
    let n = a.nrows();
    let h = TAU / m as f64;
    let terms: Vec<CMat> = (0..m)
        .into_par_iter()
        .map(|k| {
            let res = inverse(&(CMat::identity(n, n) * boundary.nodes[k] - a)).expect("node is off the spectrum");
            res * (fvals[k] * boundary.tangents[k] * h / (2.0 * PI * I))
        })
        .collect();
    let value = tree_sum(terms).unwrap_or_else(|| CMat::zeros(n, n));
    Ok(MatrixFunctionResult { value, route: Route::Contour, route_agreement: None })
}

/// Runs both routes and records their distance; the diagonalization value is
/// returned when available.
pub fn apply_function_both<F>(f: F, a: &CMat, boundary: &DomainBoundary) -> Result<MatrixFunctionResult>
where
    F: Fn(C64) -> Result<C64>,
{
    let fvals: Vec<C64> = boundary.nodes.iter().map(|&z| f(z)).collect::<Result<_>>()?;
    let contour = apply_function_contour(&fvals, a, boundary)?;
    match apply_function_diag(f, a) {
        Ok(mut d) => {
            d.route_agreement = Some(frobenius(&(&d.value - &contour.value)));
            Ok(d)
        }
        Err(CrxError::IllConditionedEigenbasis(_)) => Ok(contour),
        Err(e) => Err(e),
    }
}

/// Boundary values of `g = K(conj f)`, the interior Cauchy transform of the
/// conjugate data, as one-sided limits. The singularity is removed by
/// subtracting `h(z_0)`; the diagonal term is the derivative of `h` along
/// the curve.
pub fn cauchy_transform_conjugate(fvals: &[C64], boundary: &DomainBoundary) -> Vec<C64> {
    let m = boundary.len();
    let hvals: Vec<C64> = fvals.iter().map(|v| v.conj()).collect();
    let dh = spectral::derivative(&hvals);
    let step = TAU / m as f64;
    let z = &boundary.nodes;
    let t = &boundary.tangents;
    (0..m)
        .into_par_iter()
        .map(|j| {
            let mut acc = dh[j];
            for k in 0..m {
                if k != j {
                    acc += (hvals[k] - hvals[j]) / (z[k] - z[j]) * t[k];
                }
            }
            hvals[j] + acc * step / (2.0 * PI * I)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongerReport {
    pub lhs: f64,
    pub rhs: f64,
    pub two_sup: f64,
    pub holds_cp: bool,
    pub holds_strong: bool,
}

/// Compares `||f(A)||`, `||f(A) + g(A)^*||` with `g = K(conj f)`, and `2 sup |f|`.
pub fn stronger_conjecture_check(fvals: &[C64], a: &CMat, boundary: &DomainBoundary) -> Result<StrongerReport> {
    let tol = 1e-6;
    let fa = apply_function_contour(fvals, a, boundary)?.value;
    let conj: Vec<C64> = fvals.iter().map(|v| v.conj()).collect();
    let ga = apply_function_contour(&conj, a, boundary)?.value;
    let lhs = op_norm(&fa);
    let rhs = op_norm(&(&fa + ga.adjoint()));
    let two_sup = 2.0 * fvals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(StrongerReport { lhs, rhs, two_sup, holds_cp: rhs <= two_sup + tol, holds_strong: lhs <= rhs + tol })
}

/// `sup |f|` over the boundary: node maximum, refined by evaluating on a
/// fourfold trigonometric upsampling of the curve.
pub fn boundary_sup<F: Fn(C64) -> C64>(f: F, boundary: &DomainBoundary) -> f64 {
    let coarse = boundary.nodes.iter().map(|&z| f(z).norm()).fold(0.0, f64::max);
    let fine = spectral::upsample(&boundary.nodes, 4).into_iter().map(|z| f(z).norm()).fold(0.0, f64::max);
    coarse.max(fine)
}

/// `||f(A)|| / sup_{boundary} |f|`.
pub fn crouzeix_ratio<F: Fn(C64) -> C64>(fa: &CMat, f: F, boundary: &DomainBoundary) -> Result<f64> {
    let sup = boundary_sup(f, boundary);
    if !(sup > 0.0) {
        return Err(CrxError::ZeroFunction);
    }
    Ok(op_norm(fa) / sup)
}

/// `(C + 1/C) / 2`
pub fn tilde_constant(c: f64) -> Result<f64> {
    if !(c >= 1.0) || !c.is_finite() {
        return Err(CrxError::OutOfRange { what: "C", value: c });
    }
    Ok((c + 1.0 / c) / 2.0)
}

/// Lower bidiagonal matrix with subdiagonal `(sqrt 2, 1, ..., 1, sqrt 2)`; for
/// `n = 2` the single entry is 2.
pub fn crabb_matrix(n: usize) -> CMat {
    assert!(n >= 2, "Crabb matrix needs n >= 2");
    let mut c = CMat::zeros(n, n);
    if n == 2 {
        c[(1, 0)] = C64::from(2.0);
        return c;
    }
    for i in 0..n - 1 {
        let v = if i == 0 || i == n - 2 { SQRT_2 } else { 1.0 };
        c[(i + 1, i)] = C64::from(v);
    }
    c
}

/// `[[0, 1, 0], [0, 0, 1 - t], [0, 0, 0]]`
pub fn li_matrix(t: f64) -> CMat {
    let mut a = CMat::zeros(3, 3);
    a[(0, 1)] = C64::from(1.0);
    a[(1, 2)] = C64::from(1.0 - t);
    a
}

/// Lower Jordan block with `eps` in the top right corner.
pub fn perturbed_jordan(n: usize, eps: f64) -> CMat {
    let mut a = CMat::zeros(n, n);
    for i in 0..n - 1 {
        a[(i + 1, i)] = C64::from(1.0);
    }
    a[(0, n - 1)] += C64::from(eps);
    a
}

/// Polynomial with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<C64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::from(0.0); k + 1];
        coeffs[k] = C64::from(1.0);
        Polynomial { coeffs }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::from(0.0), |acc, &c| acc * z + c)
    }

    pub fn eval_matrix(&self, a: &CMat) -> CMat {
        let n = a.nrows();
        self.coeffs.iter().rev().fold(CMat::zeros(n, n), |acc, &c| acc * a + CMat::identity(n, n) * c)
    }

    /// Parses `"1, 0, -2+0.5i"` style coefficient lists.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s.split(',').map(|t| parse_complex(t.trim())).collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(CrxError::Input("empty coefficient list".into()));
        }
        Ok(Polynomial { coeffs })
    }
}

fn parse_complex(s: &str) -> Result<C64> {
    s.parse::<C64>().map_err(|_| CrxError::Input(format!("cannot parse complex number {s:?}")))
}

/// A holomorphic test function in one of the accepted input forms.
#[derive(Debug, Clone)]
pub enum FunctionSpec {
    Blaschke(BlaschkeProduct),
    Polynomial(Polynomial),
    /// Boundary values `(theta, value)` on the parameter grid of the boundary.
    Table(Vec<(f64, C64)>),
}

impl FunctionSpec {
    /// `.json` files hold a Blaschke product, `.csv` files a `theta,re,im`
    /// table; anything else is read as a coefficient list.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Ok(FunctionSpec::Blaschke(serde_json::from_str(&text)?)),
            Some("csv") => {
                let mut rd = csv::Reader::from_reader(text.as_bytes());
                let mut rows = Vec::new();
                for rec in rd.records() {
                    let rec = rec?;
                    let get = |i: usize| -> Result<f64> {
                        rec.get(i)
                            .and_then(|v| v.trim().parse::<f64>().ok())
                            .ok_or_else(|| CrxError::Input(format!("bad boundary-value row {rec:?}")))
                    };
                    rows.push((get(0)?, C64::new(get(1)?, get(2)?)));
                }
                Ok(FunctionSpec::Table(rows))
            }
            _ => Ok(FunctionSpec::Polynomial(Polynomial::parse(text.trim())?)),
        }
    }

    pub fn eval(&self, z: C64) -> Option<C64> {
        match self {
            FunctionSpec::Blaschke(b) => Some(b.eval(z)),
            FunctionSpec::Polynomial(p) => Some(p.eval(z)),
            FunctionSpec::Table(_) => None,
        }
    }

    pub fn boundary_values(&self, boundary: &DomainBoundary) -> Result<Vec<C64>> {
        match self {
            FunctionSpec::Table(rows) => {
                if rows.len() != boundary.len() {
                    return Err(CrxError::DimensionMismatch(format!(
                        "table has {} rows, boundary has {} nodes",
                        rows.len(),
                        boundary.len()
                    )));
                }
                Ok(rows.iter().map(|r| r.1).collect())
            }
            _ => Ok(boundary.nodes.iter().map(|&z| self.eval(z).expect("closed form")).collect()),
        }
    }

    pub fn apply(&self, a: &CMat, boundary: &DomainBoundary) -> Result<MatrixFunctionResult> {
        match self {
            FunctionSpec::Blaschke(b) => Ok(MatrixFunctionResult::exact(b.eval_matrix(a))),
            FunctionSpec::Polynomial(p) => Ok(MatrixFunctionResult::exact(p.eval_matrix(a))),
            FunctionSpec::Table(_) => apply_function_contour(&self.boundary_values(boundary)?, a, boundary),
        }
    }

    /// Boundary supremum of `|f|`.
    pub fn sup(&self, boundary: &DomainBoundary) -> Result<f64> {
        match self {
            FunctionSpec::Table(rows) => Ok(rows.iter().map(|r| r.1.norm()).fold(0.0, f64::max)),
            _ => Ok(boundary_sup(|z| self.eval(z).expect("closed form"), boundary)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp_geometry::{earl_bound, separation_constant, DiskPoint};
    use crate::linalg::{c, diag, from_rows, random_complex_gaussian};
    use crate::model_space::ModelSpaceSystem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ok<F: Fn(C64) -> C64>(f: F) -> impl Fn(C64) -> Result<C64> {
        move |z| Ok(f(z))
    }

    fn random_contraction(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let a = random_complex_gaussian(rng, n);
        let s = op_norm(&a);
        a / C64::from(s * 1.0001)
    }

    fn random_disk_point(rng: &mut ChaCha8Rng, r: f64) -> C64 {
        C64::from_polar(r * rng.random::<f64>().sqrt(), rng.random::<f64>() * TAU)
    }

    #[test]
    fn diag_route_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_complex_gaussian(&mut rng, 4);
        let id = apply_function_diag(ok(|z| z), &a).unwrap();
        assert!(frobenius(&(&id.value - &a)) < 1e-10);
        let sq = apply_function_diag(ok(|z| z * z), &a).unwrap();
        assert!(frobenius(&(&sq.value - &a * &a)) < 1e-9 * frobenius(&(&a * &a)));
        let q = random_complex_gaussian(&mut rng, 4).qr().q();
        let ev: Vec<C64> = (0..4).map(|_| random_disk_point(&mut rng, 1.0)).collect();
        let normal = &q * diag(&ev) * q.adjoint();
        let b = BlaschkeProduct::from_roots(&[c(0.3, 0.1), c(-0.5, 0.2)]).unwrap();
        let fb = apply_function_diag(ok(|z| b.eval(z)), &normal).unwrap();
        assert!(op_norm(&fb.value) <= 1.0 + 1e-10);
        let jordan = perturbed_jordan(4, 0.0);
        assert!(matches!(apply_function_diag(ok(|z| z), &jordan), Err(CrxError::IllConditionedEigenbasis(_))));
    }

    #[test]
    fn contour_route_examples() {
        let circle = DomainBoundary::circle(c(0.0, 0.0), 1.5, 256);
        let crabb = crabb_matrix(4);
        let one = apply_function_contour(&vec![c(1.0, 0.0); 256], &crabb, &circle).unwrap();
        assert!(frobenius(&(&one.value - CMat::identity(4, 4))) < 1e-10);
        let cubes: Vec<C64> = circle.nodes.iter().map(|z| z * z * z).collect();
        let c3 = apply_function_contour(&cubes, &crabb, &circle).unwrap();
        assert!(frobenius(&(&c3.value - &crabb * &crabb * &crabb)) < 1e-9);

        let zeros = DiskPoint::many(&[c(0.1, 0.2), c(-0.4, 0.1), c(0.3, -0.5)]).unwrap();
        let sys = ModelSpaceSystem::new(zeros).unwrap();
        let b = BlaschkeProduct::from_roots(&[c(0.2, 0.3), c(-0.6, 0.0)]).unwrap();
        let unit = DomainBoundary::circle(c(0.0, 0.0), 1.0, 256);
        let bv: Vec<C64> = unit.nodes.iter().map(|&z| b.eval(z)).collect();
        let via_contour = apply_function_contour(&bv, &sys.m_theta, &unit).unwrap();
        assert!(frobenius(&(&via_contour.value - b.eval_matrix(&sys.m_theta))) < 1e-8);

        let near = diag(&[c(0.999, 0.0), c(0.0, 0.0)]);
        assert!(matches!(apply_function_contour(&bv, &near, &unit), Err(CrxError::SpectrumTooCloseToBoundary(_))));
    }

    #[test]
    fn routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let boundary = DomainBoundary::circle(c(0.0, 0.0), 1.0, 256);
        for _ in 0..10 {
            let a = random_contraction(&mut rng, 4) * C64::from(0.7);
            let b = BlaschkeProduct::from_roots(&[random_disk_point(&mut rng, 0.8), random_disk_point(&mut rng, 0.8)]).unwrap();
            let r = apply_function_both(ok(|z| b.eval(z)), &a, &boundary).unwrap();
            let agree = r.route_agreement.unwrap();
            assert!(agree <= 1e-7 * (1.0 + frobenius(&r.value)), "{agree}");
        }
    }

    #[test]
    fn cauchy_transform_examples() {
        let unit = DomainBoundary::circle(c(0.0, 0.0), 1.0, 128);
        let cst = c(0.4, -1.2);
        for g in cauchy_transform_conjugate(&vec![cst; 128], &unit) {
            assert!((g - cst.conj()).norm() < 1e-12);
        }
        for g in cauchy_transform_conjugate(&unit.nodes, &unit) {
            assert!(g.norm() < 1e-12);
        }
        // Fourier oracle: f = z^2 + 3 z + i gives conj f = zbar^2 + 3 zbar - i, analytic part -i
        let f: Vec<C64> = unit.nodes.iter().map(|z| z * z + 3.0 * z + I).collect();
        for g in cauchy_transform_conjugate(&f, &unit) {
            assert!((g + I).norm() < 1e-12);
        }
        let e = DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, 128);
        let f1: Vec<C64> = e.nodes.iter().map(|z| z * z).collect();
        let f2: Vec<C64> = e.nodes.iter().map(|z| (z * 0.5).exp()).collect();
        let sum: Vec<C64> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
        let (g1, g2, gs) = (cauchy_transform_conjugate(&f1, &e), cauchy_transform_conjugate(&f2, &e), cauchy_transform_conjugate(&sum, &e));
        for k in 0..128 {
            assert!((gs[k] - g1[k] - g2[k]).norm() < 1e-9);
        }
    }

    #[test]
    fn cauchy_transform_is_the_holomorphic_trace() {
        // a boundary function is the trace of K(conj f) iff its Cauchy integral reproduces
        // K(conj f) inside and vanishes outside
        let m = 256;
        let e = DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, m);
        let f: Vec<C64> = e.nodes.iter().map(|z| z * z + (z * 0.3).exp()).collect();
        let g = cauchy_transform_conjugate(&f, &e);
        let integral = |vals: &[C64], w: C64| -> C64 {
            (0..m).map(|k| vals[k] * e.tangents[k] / (e.nodes[k] - w)).sum::<C64>() * (TAU / m as f64) / (2.0 * PI * I)
        };
        let conj: Vec<C64> = f.iter().map(|v| v.conj()).collect();
        for w in [c(0.1, 0.05), c(-0.4, 0.2), c(0.3, -0.3)] {
            assert!((integral(&g, w) - integral(&conj, w)).norm() < 1e-9);
        }
        for w in [c(1.6, 0.0), c(0.0, 1.2), c(-1.3, -0.8)] {
            assert!(integral(&g, w).norm() < 1e-9);
        }
    }

    #[test]
    fn stronger_conjecture_examples() {
        let b = BlaschkeProduct::from_roots(&[c(0.2, 0.1)]).unwrap();
        let unit = DomainBoundary::circle(c(0.0, 0.0), 1.0, 256);
        let normal = diag(&[c(0.3, 0.0), c(-0.2, 0.5), c(0.0, -0.6)]);
        let fv: Vec<C64> = unit.nodes.iter().map(|&z| b.eval(z)).collect();
        let r = stronger_conjecture_check(&fv, &normal, &unit).unwrap();
        assert!(r.lhs <= 1.0 + 1e-9 && r.holds_cp);

        for n in 3..=4 {
            let big = DomainBoundary::circle(c(0.0, 0.0), 1.0 + 1e-3, 512);
            let f: Vec<C64> = big.nodes.iter().map(|z| z.powu(n as u32 - 1)).collect();
            let r = stronger_conjecture_check(&f, &crabb_matrix(n), &big).unwrap();
            assert!((r.lhs - 2.0).abs() < 1e-8);
            assert!((r.two_sup - 2.0).abs() < 1e-2);
            assert!(r.holds_cp);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let a = random_contraction(&mut rng, 3);
            let bnd = crate::numerical_range::range_boundary(&a, 256).unwrap();
            let roots = [random_disk_point(&mut rng, 0.9), random_disk_point(&mut rng, 0.9)];
            let p = Polynomial::new(vec![roots[0], roots[1], c(1.0, 0.0)]);
            let fv: Vec<C64> = bnd.nodes.iter().map(|&z| p.eval(z)).collect();
            if let Ok(r) = stronger_conjecture_check(&fv, &a, &bnd) {
                assert!(r.holds_cp, "{r:?}");
            }
        }
    }

    #[test]
    fn crouzeix_ratio_examples() {
        let jordan = from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        let disk = DomainBoundary::circle(c(0.0, 0.0), 0.5, 256);
        let r = crouzeix_ratio(&(&jordan * C64::from(2.0)), |z| 2.0 * z, &disk).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let normal = diag(&[c(0.3, 0.0), c(-0.2, 0.5), c(0.0, -0.6)]);
        let bnd = crate::numerical_range::range_boundary(&normal, 256).unwrap();
        let p = Polynomial::new(vec![c(0.1, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(crouzeix_ratio(&p.eval_matrix(&normal), |z| p.eval(z), &bnd).unwrap() <= 1.0 + 1e-9);
        assert!(matches!(crouzeix_ratio(&normal, |_| c(0.0, 0.0), &bnd), Err(CrxError::ZeroFunction)));
    }

    #[test]
    fn tilde_constant_values() {
        assert_eq!(tilde_constant(1.0).unwrap(), 1.0);
        assert_eq!(tilde_constant(2.0).unwrap(), 1.25);
        assert!((tilde_constant(1.0 + SQRT_2).unwrap() - SQRT_2).abs() < 1e-15);
        assert!(tilde_constant(0.5).is_err());
    }

    #[test]
    fn crabb_structure() {
        let c3 = crabb_matrix(3);
        assert_eq!(c3[(1, 0)], C64::from(SQRT_2));
        assert_eq!(c3[(2, 1)], C64::from(SQRT_2));
        assert_eq!(crabb_matrix(2)[(1, 0)], C64::from(2.0));
        for n in 2..=6 {
            let cm = crabb_matrix(n);
            let p = (0..n - 1).fold(CMat::identity(n, n), |acc, _| acc * &cm);
            assert!((op_norm(&p) - 2.0).abs() < 1e-12);
            // C^{n-1} e_1 = 2 e_n
            assert!((p[(n - 1, 0)] - 2.0).norm() < 1e-12);
            // sigma(C) = {0}: C^n vanishes exactly
            assert!(frobenius(&(&p * &cm)) == 0.0);
            // D^{-1} J D with D = diag(sqrt 2, 1, ..., 1, 1/sqrt 2)
            let mut d = vec![c(1.0, 0.0); n];
            d[0] = C64::from(SQRT_2);
            d[n - 1] = C64::from(1.0 / SQRT_2);
            let dinv: Vec<C64> = d.iter().map(|x| 1.0 / x).collect();
            let j = perturbed_jordan(n, 0.0);
            let djd = diag(&dinv) * j * diag(&d);
            assert!(frobenius(&(&djd - &cm)) < 1e-15, "n={n}");
        }
    }

    #[test]
    fn li_structure() {
        let l0 = li_matrix(0.0);
        assert_eq!(l0[(0, 1)], c(1.0, 0.0));
        assert_eq!(l0[(1, 2)], c(1.0, 0.0));
        let l1 = li_matrix(1.0);
        assert_eq!(crate::linalg::singular_values(&l1).iter().filter(|s| **s > 1e-12).count(), 1);
    }

    #[test]
    fn von_neumann_on_random_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let circle = DomainBoundary::circle(c(0.0, 0.0), 1.0, 512);
        for _ in 0..100 {
            let n = rng.random_range(2..=5);
            let a = random_contraction(&mut rng, n);
            let deg = rng.random_range(1..=5);
            let p = Polynomial::new((0..=deg).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect());
            let lhs = op_norm(&p.eval_matrix(&a));
            let sup = boundary_sup(|z| p.eval(z), &circle);
            assert!(lhs <= sup + 1e-8, "{lhs} > {sup}");
        }
    }

    #[test]
    fn earl_type_bound_for_separated_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut tested = 0;
        while tested < 40 {
            let n = rng.random_range(2..=4);
            let a = random_contraction(&mut rng, n);
            let ev = eigenvalues(&a);
            let Ok(pts) = DiskPoint::many(&ev) else { continue };
            let Ok(sep) = separation_constant(&pts) else { continue };
            if sep.delta < 0.05 {
                continue;
            }
            let roots: Vec<C64> = (0..rng.random_range(1..=3)).map(|_| random_disk_point(&mut rng, 0.95)).collect();
            let b = BlaschkeProduct::from_roots(&roots).unwrap();
            let lhs = op_norm(&b.eval_matrix(&a));
            let max_spec = ev.iter().map(|&l| b.eval(l).norm()).fold(0.0, f64::max);
            assert!(lhs <= earl_bound(sep.delta).unwrap() * max_spec + 1e-7);
            tested += 1;
        }
    }

    #[test]
    fn function_specs() {
        let dir = tempfile::tempdir().unwrap();
        let pj = dir.path().join("f.json");
        std::fs::write(&pj, r#"{"c_re":1.0,"c_im":0.0,"roots":[{"re":0.0,"im":0.0}]}"#).unwrap();
        let unit = DomainBoundary::circle(c(0.0, 0.0), 1.0, 64);
        let f = FunctionSpec::from_path(&pj).unwrap();
        assert_eq!(f.eval(c(0.3, 0.0)), Some(c(0.3, 0.0)));
        let pt = dir.path().join("p.txt");
        std::fs::write(&pt, "1, 0, 2+1i\n").unwrap();
        let p = FunctionSpec::from_path(&pt).unwrap();
        assert_eq!(p.eval(c(2.0, 0.0)), Some(c(9.0, 4.0)));
        let pc = dir.path().join("t.csv");
        let mut text = String::from("theta,re,im\n");
        for (t, z) in unit.thetas.iter().zip(&unit.nodes) {
            text.push_str(&format!("{t},{},{}\n", z.re, z.im));
        }
        std::fs::write(&pc, text).unwrap();
        let tab = FunctionSpec::from_path(&pc).unwrap();
        let a = crabb_matrix(3) * C64::from(0.3);
        let v = tab.apply(&a, &unit).unwrap();
        assert!(frobenius(&(&v.value - &a)) < 1e-10);
        assert!((tab.sup(&unit).unwrap() - 1.0).abs() < 1e-12);
        assert!(tab.boundary_values(&DomainBoundary::circle(c(0.0, 0.0), 1.0, 32)).is_err());
    }
}
