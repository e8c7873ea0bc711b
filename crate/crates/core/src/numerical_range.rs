//! Numerical range `W(A)` by a supporting-line sweep, numerical radius and
//! spectrum containment.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CrxError, Result};
use crate::linalg::{eigenvalues, hermitian_eig, hermitian_max, inner, CMat, CVec, C64, I};
use crate::spectral;

pub const DEFAULT_NODES: usize = 256;

/// A closed, positively oriented curve sampled at uniform parameter values.
#[derive(Debug, Clone, Serialize)]
pub struct DomainBoundary {
    pub thetas: Vec<f64>,
    pub nodes: Vec<C64>,
    /// `d zeta / d theta`
    pub tangents: Vec<C64>,
    pub convex: bool,
    /// No corners and no flat segments.
    pub smooth: bool,
    /// Support angle of each node, for boundaries of numerical ranges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_angles: Option<Vec<f64>>,
}

impl DomainBoundary {
    /// Boundary from uniformly parametrized nodes; tangents by spectral
    /// differentiation. Negatively oriented input is reversed.
    pub fn from_nodes(nodes: Vec<C64>) -> Result<Self> {
        let m = nodes.len();
        if m < 16 {
            return Err(CrxError::Input(format!("boundary needs at least 16 nodes, got {m}")));
        }
        let mut nodes = nodes;
        if signed_area(&nodes) < 0.0 {
            nodes[1..].reverse();
        }
        let tangents = spectral::derivative(&nodes);
        let convex = polygon_convex(&nodes);
        let smooth = !has_flat_or_corner(&nodes, &tangents);
        Ok(DomainBoundary { thetas: spectral::angles(m), nodes, tangents, convex, smooth, support_angles: None })
    }

    pub fn circle(center: C64, radius: f64, m: usize) -> Self {
        let thetas = spectral::angles(m);
        let nodes = thetas.iter().map(|&t| center + C64::from_polar(radius, t)).collect();
        let tangents = thetas.iter().map(|&t| I * C64::from_polar(radius, t)).collect();
        DomainBoundary { thetas, nodes, tangents, convex: true, smooth: true, support_angles: None }
    }

    /// Axis-aligned ellipse with semi-axes `a` (real) and `b` (imaginary).
    pub fn ellipse(center: C64, a: f64, b: f64, m: usize) -> Self {
        let thetas = spectral::angles(m);
        let nodes = thetas.iter().map(|&t| center + C64::new(a * t.cos(), b * t.sin())).collect();
        let tangents = thetas.iter().map(|&t| C64::new(-a * t.sin(), b * t.cos())).collect();
        DomainBoundary { thetas, nodes, tangents, convex: true, smooth: true, support_angles: None }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    /// Largest distance between the centroid of the nodes and a node.
    pub fn scale(&self) -> f64 {
        let cen = self.nodes.iter().sum::<C64>() / self.nodes.len() as f64;
        self.nodes.iter().map(|z| (z - cen).norm()).fold(0.0, f64::max)
    }

    /// Winding number of the node polygon around `z`.
    pub fn winding_number(&self, z: C64) -> i64 {
        let m = self.nodes.len();
        let total: f64 = (0..m)
            .map(|k| {
                let a = self.nodes[k] - z;
                let b = self.nodes[(k + 1) % m] - z;
                (b / a).arg()
            })
            .sum();
        (total / TAU).round() as i64
    }

    /// Distance from `z` to the node polygon.
    pub fn distance(&self, z: C64) -> f64 {
        let m = self.nodes.len();
        (0..m)
            .map(|k| segment_distance(z, self.nodes[k], self.nodes[(k + 1) % m]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive inside, negative outside.
    pub fn signed_distance(&self, z: C64) -> f64 {
        let d = self.distance(z);
        if self.winding_number(z) != 0 {
            d
        } else {
            -d
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.signed_distance(z) > 0.0
    }

    /// Mean spacing between consecutive nodes.
    pub fn spacing(&self) -> f64 {
        let m = self.nodes.len();
        (0..m).map(|k| (self.nodes[(k + 1) % m] - self.nodes[k]).norm()).sum::<f64>() / m as f64
    }

    /// CSV with columns `theta,re,im,dre,dim`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["theta", "re", "im", "dre", "dim"])?;
        for k in 0..self.nodes.len() {
            wr.write_record(&[
                format!("{:.17e}", self.thetas[k]),
                format!("{:.17e}", self.nodes[k].re),
                format!("{:.17e}", self.nodes[k].im),
                format!("{:.17e}", self.tangents[k].re),
                format!("{:.17e}", self.tangents[k].im),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn signed_area(nodes: &[C64]) -> f64 {
    let m = nodes.len();
    0.5 * (0..m).map(|k| (nodes[k].conj() * nodes[(k + 1) % m]).im).sum::<f64>()
}

fn segment_distance(z: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

fn polygon_convex(nodes: &[C64]) -> bool {
    let m = nodes.len();
    let scale = nodes.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    (0..m).all(|k| {
        let a = nodes[(k + 1) % m] - nodes[k];
        let b = nodes[(k + 2) % m] - nodes[(k + 1) % m];
        (a.conj() * b).im >= -1e-10 * scale * scale
    })
}

/// Corners show up as repeated nodes, flat segments as chords much longer than
/// the arclength predicted by the tangents.
fn has_flat_or_corner(nodes: &[C64], tangents: &[C64]) -> bool {
    let m = nodes.len();
    let h = TAU / m as f64;
    let cen = nodes.iter().sum::<C64>() / m as f64;
    let scale = nodes.iter().map(|z| (z - cen).norm()).fold(0.0, f64::max);
    (0..m).any(|k| {
        let chord = (nodes[(k + 1) % m] - nodes[k]).norm();
        let pred = 0.5 * h * (tangents[k].norm() + tangents[(k + 1) % m].norm());
        chord < 1e-10 * scale || chord > 2.0 * pred + 1e-9 * scale
    })
}

/// `Re(e^{-i theta} A)` and `Im(e^{-i theta} A)`.
fn rotated_parts(a: &CMat, theta: f64) -> (CMat, CMat) {
    let r = a * C64::from_polar(1.0, -theta);
    let ra = r.adjoint();
    let h = (&r + &ra) * C64::from(0.5);
    let k = (&r - &ra) * (-0.5 * I);
    (h, k)
}

struct Support {
    point: C64,
    tangent: C64,
    gap: f64,
}

fn support(a: &CMat, theta: f64) -> Support {
    let (h, k) = rotated_parts(a, theta);
    let (vals, vecs) = hermitian_eig(&h);
    let n = vals.len();
    let x = vecs.column(n - 1).into_owned();
    let point = inner(&(a * &x), &x);
    let kx = &k * &x;
    let lam = vals[n - 1];
    let mut curv = 0.0;
    for j in 0..n - 1 {
        let d = lam - vals[j];
        let xj = vecs.column(j).into_owned();
        let p = inner(&kx, &xj).norm_sqr();
        if p > 0.0 {
            curv += 2.0 * p / d.max(f64::MIN_POSITIVE);
        }
    }
    let gap = if n > 1 { lam - vals[n - 2] } else { f64::INFINITY };
    Support { point, tangent: I * C64::from_polar(1.0, theta) * curv, gap }
}

/// Boundary of `W(A)` with `m` nodes.
///
/// Support points are computed on `4m` uniform support angles. The nodes are
/// then placed uniformly in the parameter `t(theta) = int (1 + r/r_mean)/2`,
/// with `r = |d zeta / d theta|`, which spreads them over long, nearly flat
/// stretches as well as around tight bends. Tangents come from the analytic
/// derivative of the support point (second order perturbation of the top
/// eigenpair) and the chain rule.
pub fn range_boundary(a: &CMat, m: usize) -> Result<DomainBoundary> {
    if m < 16 {
        return Err(CrxError::Input(format!("range_boundary needs m >= 16, got {m}")));
    }
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(CrxError::DimensionMismatch("matrix must be square and non-empty".into()));
    }
    let fine_thetas = spectral::angles(4 * m);
    let fine: Vec<Support> = fine_thetas.par_iter().map(|&t| support(a, t)).collect();
    let fine_nodes: Vec<C64> = fine.iter().map(|s| s.point).collect();

    let cen = fine_nodes.iter().sum::<C64>() / fine_nodes.len() as f64;
    let scale = fine_nodes.iter().map(|z| (z - cen).norm()).fold(0.0, f64::max);
    let norm_a = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if scale <= 1e-12 * norm_a || signed_area(&fine_nodes) <= 1e-10 * scale * scale {
        return Err(CrxError::DegenerateRange);
    }
    let near_multiple = fine.iter().any(|s| s.gap < 1e-8 * scale);

    let angles = if near_multiple { None } else { blended_angles(&fine, m) };
    let (angles, speed) = match angles {
        Some(v) => v,
        None => (spectral::angles(m), vec![1.0; m]),
    };
    let sup: Vec<Support> = angles.par_iter().map(|&t| support(a, t)).collect();
    let nodes: Vec<C64> = sup.iter().map(|s| s.point).collect();
    let tangents: Vec<C64> = sup.iter().zip(&speed).map(|(s, g)| s.tangent / *g).collect();
    let smooth = !near_multiple && !has_flat_or_corner(&nodes, &tangents);
    let convex = polygon_convex(&nodes);
    Ok(DomainBoundary { thetas: spectral::angles(m), nodes, tangents, convex, smooth, support_angles: Some(angles) })
}

/// Support angles uniform in the blended parameter, and `dt/dtheta` there.
/// `None` when the density is not resolved well enough to be monotone.
fn blended_angles(fine: &[Support], m: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let r: Vec<f64> = fine.iter().map(|s| s.tangent.norm()).collect();
    let rbar = r.iter().sum::<f64>() / r.len() as f64;
    if !(rbar > 0.0) {
        return None;
    }
    let g: Vec<f64> = r.iter().map(|x| 0.5 * (1.0 + x / rbar)).collect();
    let series = spectral::TrigSeries::from_samples(&g);
    let check = spectral::upsample(&g.iter().map(|&v| C64::from(v)).collect::<Vec<_>>(), 2);
    if check.iter().any(|v| v.re < 0.25) {
        return None;
    }
    let total = series.integral(TAU);
    let mut angles = Vec::with_capacity(m);
    let mut speed = Vec::with_capacity(m);
    let mut lo = 0.0;
    for k in 0..m {
        let target = total * k as f64 / m as f64;
        let mut hi = TAU;
        let mut th = lo + (target - series.integral(lo)) / series.eval(lo).max(0.25);
        for _ in 0..100 {
            if !(th > lo && th < hi) {
                th = 0.5 * (lo + hi);
            }
            let f = series.integral(th) - target;
            if f.abs() <= 1e-14 * total {
                break;
            }
            if f > 0.0 {
                hi = th;
            } else {
                lo = th;
            }
            th -= f / series.eval(th);
        }
        lo = th;
        angles.push(th);
        speed.push(series.eval(th) * TAU / total);
    }
    Some((angles, speed))
}

fn lambda_max_rotated(a: &CMat, theta: f64) -> f64 {
    hermitian_max(&rotated_parts(a, theta).0).0
}

/// `w(A) = max_theta lambda_max(Re(e^{-i theta} A))`: 64-angle scan, then
/// golden-section refinement of every local maximum to 1e-10.
pub fn numerical_radius(a: &CMat) -> f64 {
    numerical_radius_arg(a).0
}

/// Numerical radius together with a maximizing support angle.
pub fn numerical_radius_arg(a: &CMat) -> (f64, f64) {
    if a.is_empty() {
        return (0.0, 0.0);
    }
    let m = 64;
    let h = TAU / m as f64;
    let vals: Vec<f64> = (0..m).map(|k| lambda_max_rotated(a, k as f64 * h)).collect();
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (k, &v) in vals.iter().enumerate() {
        if v > best.0 {
            best = (v, k as f64 * h);
        }
    }
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    for k in 0..m {
        let prev = vals[(k + m - 1) % m];
        let next = vals[(k + 1) % m];
        if vals[k] < prev || vals[k] < next {
            continue;
        }
        let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
        let mut x1 = hi - gr * (hi - lo);
        let mut x2 = lo + gr * (hi - lo);
        let mut f1 = lambda_max_rotated(a, x1);
        let mut f2 = lambda_max_rotated(a, x2);
        while hi - lo > 1e-10 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = lambda_max_rotated(a, x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = lambda_max_rotated(a, x1);
            }
        }
        if f1 > best.0 {
            best = (f1, x1);
        }
        if f2 > best.0 {
            best = (f2, x2);
        }
    }
    (best.0, best.1.rem_euclid(TAU))
}

/// Unit vector `y` with `<A y, y> = w(A) e^{i theta}` at the maximizing angle.
pub fn numerical_radius_vector(a: &CMat) -> (f64, CVec) {
    let (w, theta) = numerical_radius_arg(a);
    let (_, y) = hermitian_max(&rotated_parts(a, theta).0);
    (w, y)
}

/// Whether every eigenvalue lies strictly inside the boundary polygon, and the
/// smallest signed distance of an eigenvalue to it.
pub fn spectrum_in_interior(a: &CMat, boundary: &DomainBoundary) -> (bool, f64) {
    let spec = eigenvalues(a);
    spectrum_margin(&spec, boundary)
}

fn spectrum_margin(spec: &[C64], boundary: &DomainBoundary) -> (bool, f64) {
    let margin = spec.iter().map(|&z| boundary.signed_distance(z)).fold(f64::INFINITY, f64::min);
    let tol = 1e-8 * boundary.scale().max(1e-300);
    (margin > tol, margin)
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeReport {
    pub boundary: DomainBoundary,
    pub radius: f64,
    pub spectrum: Vec<C64>,
    pub spectrum_interior: bool,
    pub interior_margin: f64,
}

pub fn range_report(a: &CMat, m: usize) -> Result<RangeReport> {
    let boundary = range_boundary(a, m)?;
    let radius = numerical_radius(a);
    let spectrum = eigenvalues(a);
    let (spectrum_interior, interior_margin) = spectrum_margin(&spectrum, &boundary);
    Ok(RangeReport { boundary, radius, spectrum, spectrum_interior, interior_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag, from_rows, op_norm, random_complex_gaussian};
    use crate::matrix_functions::{crabb_matrix, li_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn jordan2() -> CMat {
        from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
    }

    /// Brute-force distance to the convex hull of a point set with the hull
    /// given in counterclockwise order.
    fn hull_distance(hull: &[C64], z: C64) -> f64 {
        (0..hull.len()).map(|k| segment_distance(z, hull[k], hull[(k + 1) % hull.len()])).fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn diagonal_square() {
        let corners = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        let a = diag(&corners);
        let b = range_boundary(&a, 256).unwrap();
        assert!(!b.smooth);
        assert!(b.convex);
        for z in &b.nodes {
            assert!(hull_distance(&corners, *z) < 1e-12);
        }
        for corner in corners {
            assert!(b.nodes.iter().any(|z| (z - corner).norm() < 1e-12));
        }
        let (inside, margin) = spectrum_in_interior(&a, &b);
        assert!(!inside);
        assert!(margin.abs() < 1e-12);
    }

    #[test]
    fn crabb_and_li_give_circles() {
        for n in 2..=6 {
            let b = range_boundary(&crabb_matrix(n), 256).unwrap();
            assert!(b.smooth && b.convex);
            for z in &b.nodes {
                assert!((z.norm() - 1.0).abs() < 1e-8, "n={n}");
            }
            let (inside, margin) = spectrum_in_interior(&crabb_matrix(n), &b);
            assert!(inside && (margin - 1.0).abs() < 1e-3);
        }
        for t in [0.0, 0.3, 0.6, 1.0] {
            let r = (1.0 + (1.0f64 - t).powi(2)).sqrt() / 2.0;
            let b = range_boundary(&li_matrix(t), 256).unwrap();
            for z in &b.nodes {
                assert!((z.norm() - r).abs() < 1e-8, "t={t}");
            }
        }
    }

    #[test]
    fn numerical_radius_cases() {
        assert!((numerical_radius(&jordan2()) - 0.5).abs() < 1e-12);
        assert!((numerical_radius(&li_matrix(0.0)) - 2f64.sqrt() / 2.0).abs() < 1e-10);
        let h = from_rows(&[vec![c(2.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(-3.0, 0.0)]]);
        let ev = crate::linalg::hermitian_eig(&h).0;
        let maxabs = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        assert!((numerical_radius(&h) - maxabs).abs() < 1e-10);
    }

    #[test]
    fn numerical_radius_versus_dense_sweep_and_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let a = random_complex_gaussian(&mut rng, 4);
            let w = numerical_radius(&a);
            let dense = (0..20000).map(|k| lambda_max_rotated(&a, TAU * k as f64 / 20000.0)).fold(0.0, f64::max);
            assert!(w >= dense - 1e-12 && w - dense < 1e-6);
            let n = op_norm(&a);
            assert!(w <= n + 1e-12 && n <= 2.0 * w + 1e-12);
            let b = range_boundary(&a, 256).unwrap();
            let node_max = b.nodes.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(node_max <= w + 1e-12);
        }
    }

    #[test]
    fn analytic_tangents_match_spectral_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_complex_gaussian(&mut rng, 3);
        let b = range_boundary(&a, 512).unwrap();
        let fd = spectral::derivative(&b.nodes);
        let s = b.scale();
        for (t, d) in b.tangents.iter().zip(&fd) {
            assert!((t - d).norm() < 1e-6 * s, "{t} {d}");
        }
    }

    #[test]
    fn random_boundary_nodes_are_in_range_and_spectrum_check_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let a = random_complex_gaussian(&mut rng, 4);
        let b = range_boundary(&a, 256).unwrap();
        assert!(b.convex && b.signed_area() > 0.0);
        let (inside, margin) = spectrum_in_interior(&a, &b);
        let brute = eigenvalues(&a)
            .iter()
            .map(|&z| {
                let d = b.nodes.iter().zip(b.nodes.iter().cycle().skip(1)).map(|(p, q)| segment_distance(z, *p, *q)).fold(f64::INFINITY, f64::min);
                d
            })
            .fold(f64::INFINITY, f64::min);
        assert!((margin.abs() - brute).abs() < 1e-14);
        assert_eq!(inside, margin > 0.0);
    }

    #[test]
    fn translation_rotation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_complex_gaussian(&mut rng, 3);
        let phi = 0.7;
        let shift = c(0.3, -1.1);
        let rot = C64::from_polar(1.0, phi);
        let n = 3;
        let b2 = &a * rot + CMat::identity(n, n) * shift;
        let m = 256;
        let base = range_boundary(&a, m).unwrap();
        // rotating by phi shifts the support angle by phi; evaluate the original at theta - phi
        let moved = range_boundary(&b2, m).unwrap();
        for (k, t) in moved.support_angles.as_ref().unwrap().iter().enumerate() {
            let expect = rot * support(&a, t - phi).point + shift;
            assert!((moved.nodes[k] - expect).norm() < 1e-9);
        }
        // same curve: every moved node lies on the image of the original polygon
        for z in &moved.nodes {
            let back = (z - shift) / rot;
            assert!(base.distance(back) < 1e-3 * base.scale());
        }
    }

    #[test]
    fn normal_matrix_hull() {
        let ev = [c(0.5, 0.2), c(-0.3, 0.9), c(-0.8, -0.4), c(0.6, -0.7), c(0.0, 0.0)];
        let hull = [ev[0], ev[1], ev[2], ev[3]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_complex_gaussian(&mut rng, 5);
        let q = g.qr().q();
        let a = &q * diag(&ev) * q.adjoint();
        let b = range_boundary(&a, 256).unwrap();
        for z in &b.nodes {
            assert!(hull_distance(&hull, *z) < 1e-8);
        }
        for v in hull {
            assert!(b.nodes.iter().map(|z| (z - v).norm()).fold(f64::INFINITY, f64::min) < 1e-8);
        }
        assert!(!b.smooth);
    }

    #[test]
    fn degenerate_ranges() {
        let a = diag(&[c(-1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)]);
        assert!(matches!(range_boundary(&a, 64), Err(CrxError::DegenerateRange)));
        let s = CMat::identity(3, 3) * c(0.2, 0.1);
        assert!(matches!(range_boundary(&s, 64), Err(CrxError::DegenerateRange)));
        assert!(range_boundary(&jordan2(), 8).is_err());
    }

    #[test]
    fn boundary_from_nodes_and_csv() {
        let e = DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, 128);
        let rebuilt = DomainBoundary::from_nodes(e.nodes.iter().rev().copied().collect()).unwrap();
        assert!(rebuilt.signed_area() > 0.0);
        assert!((rebuilt.signed_area() - std::f64::consts::PI * 0.6).abs() < 1e-3);
        assert!(rebuilt.smooth && rebuilt.convex);
        let fwd = DomainBoundary::from_nodes(e.nodes.clone()).unwrap();
        for (t, d) in fwd.tangents.iter().zip(&e.tangents) {
            assert!((t - d).norm() < 1e-12);
        }
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta,re,im,dre,dim\n"));
        assert_eq!(text.lines().count(), 129);
        assert_eq!(e.winding_number(c(0.1, 0.1)), 1);
        assert_eq!(e.winding_number(c(2.0, 0.0)), 0);
    }
}
