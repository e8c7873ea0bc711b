//! Riemann maps `phi: Omega -> D` normalized by `phi(center) = 0`,
//! `phi'(center) > 0`.
//!
//! Circles get exact maps. Other smooth convex domains are mapped with the
//! Szegő kernel, obtained from the Kerzman-Stein second kind integral equation
//! on the boundary nodes; boundary values and derivatives of `phi` follow from
//! the kernel in closed form and interior values from Cauchy integrals.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CrxError, Result};
use crate::linalg::{eigenvalues, inverse, CMat, C64, I};
use crate::matrix_functions::{apply_function_contour, apply_function_diag, MatrixFunctionResult};
use crate::numerical_range::DomainBoundary;
use crate::spectral;

const CIRCLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapKind {
    Identity,
    Scale { r: f64 },
    /// Disk `|z - c| < radius` sent to the unit disk with `center` going to 0.
    Moebius { c: C64, radius: f64 },
    Numeric,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Identity => write!(f, "identity"),
            MapKind::Scale { r } => write!(f, "scale:{r}"),
            MapKind::Moebius { .. } => write!(f, "moebius"),
            MapKind::Numeric => write!(f, "numeric"),
        }
    }
}

/// User choice for `--map`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapOverride {
    Auto,
    Identity,
    Scale(f64),
}

impl FromStr for MapOverride {
    type Err = CrxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MapOverride::Auto),
            "identity" => Ok(MapOverride::Identity),
            _ => {
                let r = s
                    .strip_prefix("scale:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| CrxError::Input(format!("map must be identity, scale:<r> or auto, got {s:?}")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(CrxError::OutOfRange { what: "map scale", value: r });
                }
                Ok(MapOverride::Scale(r))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalMap {
    pub kind: MapKind,
    pub center: C64,
    pub boundary: DomainBoundary,
    /// `phi(zeta_k)` on the boundary nodes.
    pub boundary_values: Vec<C64>,
    /// `phi'(zeta_k)` on the boundary nodes.
    pub boundary_derivs: Vec<C64>,
    /// Relative mismatch between `d phi / d theta` and `phi' zeta'` (0 for exact maps).
    pub residual: f64,
}

impl ConformalMap {
    pub fn identity(m: usize) -> Self {
        let boundary = DomainBoundary::circle(C64::from(0.0), 1.0, m);
        Self::exact(MapKind::Identity, C64::from(0.0), boundary)
    }

    pub fn scale(r: f64, m: usize) -> Self {
        let boundary = DomainBoundary::circle(C64::from(0.0), r, m);
        Self::exact(MapKind::Scale { r }, C64::from(0.0), boundary)
    }

    fn exact(kind: MapKind, center: C64, boundary: DomainBoundary) -> Self {
        let mut map = ConformalMap {
            kind,
            center,
            boundary,
            boundary_values: Vec::new(),
            boundary_derivs: Vec::new(),
            residual: 0.0,
        };
        map.boundary_values = map.boundary.nodes.iter().map(|&z| map.exact_eval(z)).collect();
        map.boundary_derivs = map.boundary.nodes.iter().map(|&z| map.exact_deriv(z)).collect();
        map
    }

    fn moebius_u0(&self) -> (C64, f64, C64) {
        match self.kind {
            MapKind::Moebius { c, radius } => (c, radius, (self.center - c) / radius),
            _ => unreachable!("moebius parameters requested for another map kind"),
        }
    }

    fn exact_eval(&self, z: C64) -> C64 {
        match self.kind {
            MapKind::Identity => z,
            MapKind::Scale { r } => z / r,
            MapKind::Moebius { .. } => {
                let (c, rad, u0) = self.moebius_u0();
                let u = (z - c) / rad;
                (u - u0) / (1.0 - u0.conj() * u)
            }
            MapKind::Numeric => unreachable!(),
        }
    }

    fn exact_deriv(&self, z: C64) -> C64 {
        match self.kind {
            MapKind::Identity => C64::from(1.0),
            MapKind::Scale { r } => C64::from(1.0 / r),
            MapKind::Moebius { .. } => {
                let (c, rad, u0) = self.moebius_u0();
                let u = (z - c) / rad;
                let d = 1.0 - u0.conj() * u;
                (1.0 - u0.norm_sqr()) / (d * d) / rad
            }
            MapKind::Numeric => unreachable!(),
        }
    }

    fn exact_inverse(&self, w: C64) -> C64 {
        match self.kind {
            MapKind::Identity => w,
            MapKind::Scale { r } => w * r,
            MapKind::Moebius { .. } => {
                let (c, rad, u0) = self.moebius_u0();
                c + rad * (w + u0) / (1.0 + u0.conj() * w)
            }
            MapKind::Numeric => unreachable!(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind != MapKind::Numeric
    }

    /// `phi(z)` for `z` inside the domain.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if self.is_exact() {
            return Ok(self.exact_eval(z));
        }
        self.cauchy(&self.boundary_values, z)
    }

    /// `phi'(z)` for `z` inside the domain.
    pub fn derivative(&self, z: C64) -> Result<C64> {
        if self.is_exact() {
            return Ok(self.exact_deriv(z));
        }
        self.cauchy(&self.boundary_derivs, z)
    }

    /// `phi^{-1}(w)` for `|w| < 1`.
    pub fn inverse(&self, w: C64) -> Result<C64> {
        if self.is_exact() {
            return Ok(self.exact_inverse(w));
        }
        let spacing = TAU / self.boundary.len() as f64;
        if w.norm() >= 1.0 - spacing {
            return Err(CrxError::TooCloseToBoundary(format!("{w}")));
        }
        // (1/2 pi i) \oint zeta phi'(zeta) / (phi(zeta) - w) d zeta, in barycentric form
        let mut num = C64::from(0.0);
        let mut den = C64::from(0.0);
        for k in 0..self.boundary.len() {
            let q = self.boundary_derivs[k] * self.boundary.tangents[k] / (self.boundary_values[k] - w);
            num += self.boundary.nodes[k] * q;
            den += q;
        }
        Ok(num / den)
    }

    /// Barycentric trapezoid Cauchy integral of boundary samples. Points
    /// closer than five node spacings to the boundary use the trigonometric
    /// interpolant of the data on a finer grid (up to 256 times finer).
    fn cauchy(&self, vals: &[C64], z: C64) -> Result<C64> {
        let d = self.boundary.signed_distance(z);
        let sp = self.boundary.spacing();
        let mut factor = 1;
        while d < 5.0 * sp / factor as f64 && factor < 256 {
            factor *= 2;
        }
        if d < 5.0 * sp / factor as f64 {
            return Err(CrxError::TooCloseToBoundary(format!("{z}")));
        }
        if factor == 1 {
            return Ok(barycentric(&self.boundary.nodes, &self.boundary.tangents, vals, z));
        }
        let nodes = spectral::upsample(&self.boundary.nodes, factor);
        let tangents = spectral::upsample(&self.boundary.tangents, factor);
        Ok(barycentric(&nodes, &tangents, &spectral::upsample(vals, factor), z))
    }

    /// `|phi'(zeta_k)|` on the boundary nodes.
    pub fn boundary_derivative_abs(&self) -> Vec<f64> {
        self.boundary_derivs.iter().map(|d| d.norm()).collect()
    }

    /// `\oint |phi'| |d zeta|`, which equals `2 pi` for a correct map.
    pub fn image_circumference(&self) -> f64 {
        let h = TAU / self.boundary.len() as f64;
        self.boundary_derivs.iter().zip(&self.boundary.tangents).map(|(d, t)| d.norm() * t.norm() * h).sum()
    }

    /// Disk angles `arg phi(zeta_k)` unwrapped to an increasing sequence.
    pub fn disk_angles(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.boundary_values.len());
        let mut prev = self.boundary_values[0].arg();
        out.push(prev);
        for v in &self.boundary_values[1..] {
            let mut a = v.arg();
            while a < prev {
                a += TAU;
            }
            out.push(a);
            prev = a;
        }
        out
    }

    /// `Phi = phi(A)`. Exact maps are applied in closed form; numeric maps use
    /// the eigendecomposition when it is well conditioned and the boundary
    /// Cauchy integral otherwise.
    pub fn apply_to_matrix(&self, a: &CMat) -> Result<MatrixFunctionResult> {
        let n = a.nrows();
        let spec = eigenvalues(a);
        if self.is_exact() {
            if spec.iter().any(|&l| self.exact_eval(l).norm() >= 1.0) {
                return Err(CrxError::MapDomainMismatch);
            }
            let value = match self.kind {
                MapKind::Identity => a.clone(),
                MapKind::Scale { r } => a / C64::from(r),
                _ => {
                    let (c, rad, u0) = self.moebius_u0();
                    let id = CMat::identity(n, n);
                    let u = (a - &id * c) / C64::from(rad);
                    let den = inverse(&(&id - &u * u0.conj())).ok_or(CrxError::MapDomainMismatch)?;
                    (&u - &id * u0) * den
                }
            };
            return Ok(MatrixFunctionResult::exact(value));
        }
        if spec.iter().any(|&l| !self.boundary.contains(l)) {
            return Err(CrxError::MapDomainMismatch);
        }
        let by_diag = apply_function_diag(|z| self.eval(z), a);
        match by_diag {
            Ok(r) => Ok(r),
            Err(CrxError::IllConditionedEigenbasis(_)) | Err(CrxError::TooCloseToBoundary(_)) => {
                apply_function_contour(&self.boundary_values, a, &self.boundary)
            }
            Err(e) => Err(e),
        }
    }
}

fn barycentric(nodes: &[C64], tangents: &[C64], vals: &[C64], z: C64) -> C64 {
    let mut num = C64::from(0.0);
    let mut den = C64::from(0.0);
    for k in 0..nodes.len() {
        let q = tangents[k] / (nodes[k] - z);
        num += vals[k] * q;
        den += q;
    }
    num / den
}

fn circle_fit(boundary: &DomainBoundary) -> Option<(C64, f64)> {
    let m = boundary.len() as f64;
    let c = boundary.nodes.iter().sum::<C64>() / m;
    let radii: Vec<f64> = boundary.nodes.iter().map(|z| (z - c).norm()).collect();
    let r = radii.iter().sum::<f64>() / m;
    let spread = radii.iter().map(|x| (x - r).abs()).fold(0.0, f64::max);
    (spread <= CIRCLE_TOL * r.max(1.0)).then_some((c, r))
}

/// Riemann map of the domain bounded by `boundary` with `phi(center) = 0`.
pub fn build_map(boundary: &DomainBoundary, center: C64) -> Result<ConformalMap> {
    if !boundary.smooth {
        return Err(CrxError::FlatBoundary);
    }
    if !boundary.contains(center) {
        return Err(CrxError::CenterOutside(format!("{center}")));
    }
    if let Some((c, r)) = circle_fit(boundary) {
        let tol = CIRCLE_TOL * r.max(1.0);
        let kind = if c.norm() <= tol && center.norm() <= tol {
            if (r - 1.0).abs() <= CIRCLE_TOL {
                MapKind::Identity
            } else {
                MapKind::Scale { r }
            }
        } else {
            MapKind::Moebius { c, radius: r }
        };
        let center = if kind == MapKind::Identity || matches!(kind, MapKind::Scale { .. }) {
            C64::from(0.0)
        } else {
            center
        };
        return Ok(ConformalMap::exact(kind, center, boundary.clone()));
    }
    szego_map(boundary, center)
}

/// Map selection with a user override. Overrides bypass the numeric solver and
/// take the disk `|z| < 1` (or `|z| < r`) as the domain.
pub fn map_with_override(ov: MapOverride, boundary: &DomainBoundary, center: C64) -> Result<ConformalMap> {
    match ov {
        MapOverride::Auto => build_map(boundary, center),
        MapOverride::Identity => Ok(ConformalMap::identity(boundary.len())),
        MapOverride::Scale(r) => Ok(ConformalMap::scale(r, boundary.len())),
    }
}

/// `phi(z)` for interior `z`.
pub fn map_interior(map: &ConformalMap, z: C64) -> Result<C64> {
    map.eval(z)
}

pub fn boundary_derivative_abs(map: &ConformalMap) -> Vec<f64> {
    map.boundary_derivative_abs()
}

fn szego_map(boundary: &DomainBoundary, a: C64) -> Result<ConformalMap> {
    let m = boundary.len();
    let h = TAU / m as f64;
    let z = &boundary.nodes;
    let speed: Vec<f64> = boundary.tangents.iter().map(|t| t.norm()).collect();
    let t: Vec<C64> = boundary.tangents.iter().zip(&speed).map(|(d, s)| d / s).collect();
    let sw: Vec<f64> = speed.iter().map(|s| (s * h).sqrt()).collect();
    let cauchy = |w: C64, k: usize| -> C64 { t[k] / (z[k] - w) / (2.0 * PI * I) };

    // (I + A) S = conj(H(a, .)) with A(z, w) = conj(H(w, z)) - H(z, w), symmetrized
    // by the square roots of the arclength weights so the operator is I + skew-Hermitian.
    let mut mat = CMat::identity(m, m);
    for j in 0..m {
        for k in 0..m {
            if j != k {
                let kern = cauchy(z[k], j).conj() - cauchy(z[j], k);
                mat[(j, k)] += sw[j] * kern * sw[k];
            }
        }
    }
    let rhs = crate::linalg::CVec::from_iterator(m, (0..m).map(|j| sw[j] * cauchy(a, j).conj()));
    let u = mat.lu().solve(&rhs).ok_or(CrxError::MapNonConvergence(f64::INFINITY))?;
    let s: Vec<C64> = (0..m).map(|j| u[j] / sw[j]).collect();
    let saa: C64 = (0..m).map(|k| cauchy(a, k) * s[k] * speed[k] * h).sum();

    let values: Vec<C64> = (0..m).map(|j| -I * t[j] * s[j] / s[j].conj()).collect();
    let derivs: Vec<C64> = (0..m).map(|j| 2.0 * PI * s[j] * s[j] / saa).collect();

    let dtheta = spectral::derivative(&values);
    let scale = derivs.iter().zip(&boundary.tangents).map(|(d, t)| (d * t).norm()).fold(0.0, f64::max);
    let residual = dtheta
        .iter()
        .zip(derivs.iter().zip(&boundary.tangents))
        .map(|(dt, (d, tg))| (dt - d * tg).norm())
        .fold(0.0, f64::max)
        / scale;
    if !residual.is_finite() || residual > 1e-6 || saa.re <= 0.0 {
        return Err(CrxError::MapNonConvergence(residual));
    }
    Ok(ConformalMap {
        kind: MapKind::Numeric,
        center: a,
        boundary: boundary.clone(),
        boundary_values: values,
        boundary_derivs: derivs,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Boundary of g(D) with g(w) = w + eps w^2; the normalized map is g^{-1}.
    fn cardioid_like(eps: f64, m: usize) -> DomainBoundary {
        let nodes = spectral::angles(m)
            .iter()
            .map(|&t| {
                let w = C64::from_polar(1.0, t);
                w + eps * w * w
            })
            .collect();
        let mut b = DomainBoundary::from_nodes(nodes).unwrap();
        b.tangents = spectral::angles(m)
            .iter()
            .map(|&t| {
                let w = C64::from_polar(1.0, t);
                I * w * (1.0 + 2.0 * eps * w)
            })
            .collect();
        b
    }

    fn ellipse_map(m: usize) -> ConformalMap {
        build_map(&DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, m), c(0.0, 0.0)).unwrap()
    }

    fn interior_probes(seed: u64, count: usize, a: f64, b: f64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let r = 0.85 * rng.random::<f64>().sqrt();
                let t = rng.random::<f64>() * TAU;
                c(a * r * t.cos(), b * r * t.sin())
            })
            .collect()
    }

    #[test]
    fn override_parsing() {
        assert_eq!("auto".parse::<MapOverride>().unwrap(), MapOverride::Auto);
        assert_eq!("identity".parse::<MapOverride>().unwrap(), MapOverride::Identity);
        assert_eq!("scale:0.5".parse::<MapOverride>().unwrap(), MapOverride::Scale(0.5));
        assert!("scale:-1".parse::<MapOverride>().is_err());
        assert!("moebius".parse::<MapOverride>().is_err());
    }

    #[test]
    fn circles_route_to_exact_maps() {
        let unit = build_map(&DomainBoundary::circle(c(0.0, 0.0), 1.0, 64), c(0.0, 0.0)).unwrap();
        assert_eq!(unit.kind, MapKind::Identity);
        assert_eq!(unit.eval(c(0.3, 0.2)).unwrap(), c(0.3, 0.2));
        assert!(unit.boundary_derivative_abs().iter().all(|&d| d == 1.0));
        let r = 0.7;
        let sc = build_map(&DomainBoundary::circle(c(0.0, 0.0), r, 64), c(0.0, 0.0)).unwrap();
        assert!(matches!(sc.kind, MapKind::Scale { r: rr } if (rr - r).abs() < 1e-14));
        assert!((sc.eval(c(0.35, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!(sc.boundary_derivative_abs().iter().all(|&d| (d - 1.0 / r).abs() < 1e-14));
        let off = build_map(&DomainBoundary::circle(c(1.0, -0.5), 2.0, 64), c(1.5, 0.0)).unwrap();
        assert!(matches!(off.kind, MapKind::Moebius { .. }));
        assert!(off.eval(c(1.5, 0.0)).unwrap().norm() < 1e-15);
        assert!(off.derivative(c(1.5, 0.0)).unwrap().im.abs() < 1e-15);
        for v in &off.boundary_values {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let w = c(0.2, -0.6);
        assert!((off.eval(off.inverse(w).unwrap()).unwrap() - w).norm() < 1e-14);
        assert!((off.image_circumference() - TAU).abs() < 1e-10);
    }

    #[test]
    fn matches_inverse_of_known_map() {
        let eps = 0.2;
        let map = build_map(&cardioid_like(eps, 256), c(0.0, 0.0)).unwrap();
        assert_eq!(map.kind, MapKind::Numeric);
        for (k, t) in spectral::angles(256).iter().enumerate() {
            assert!((map.boundary_values[k] - C64::from_polar(1.0, *t)).norm() < 1e-12);
        }
        for w in [c(0.3, 0.1), c(-0.5, 0.4), c(0.0, -0.7)] {
            let z = w + eps * w * w;
            assert!((map.eval(z).unwrap() - w).norm() < 1e-12);
            assert!((map.derivative(z).unwrap() - 1.0 / (1.0 + 2.0 * eps * w)).norm() < 1e-11);
            assert!((map.inverse(w).unwrap() - z).norm() < 1e-12);
        }
    }

    #[test]
    fn ellipse_map_properties() {
        let map = ellipse_map(256);
        assert_eq!(map.kind, MapKind::Numeric);
        for v in &map.boundary_values {
            assert!((v.norm() - 1.0).abs() < 1e-6);
        }
        assert!(map.eval(c(0.0, 0.0)).unwrap().norm() < 1e-8);
        let d0 = map.derivative(c(0.0, 0.0)).unwrap();
        assert!(d0.re > 0.0 && d0.im.abs() < 1e-10);
        assert!((map.image_circumference() - TAU).abs() < 1e-6);
        assert!(map.boundary_derivative_abs().iter().all(|&d| d > 0.0));
        // symmetric domain: real axis to real axis, axis endpoints to +-1 and +-i
        let x = map.eval(c(0.5, 0.0)).unwrap();
        assert!(x.im.abs() < 1e-12 && x.re > 0.0);
        assert!((map.boundary_values[0] - 1.0).norm() < 1e-10);
        assert!((map.boundary_values[64] - I).norm() < 1e-10);
        for z in interior_probes(3, 100, 1.0, 0.6) {
            let w = map.eval(z).unwrap();
            assert!(w.norm() < 1.0);
            assert!((map.inverse(w).unwrap() - z).norm() < 1e-6);
        }
    }

    #[test]
    fn ellipse_map_matches_elliptic_function_samples() {
        // w = sqrt(k) sn((2K/pi) asin(z/0.8), k) with k = 0.796265246399884...,
        // reference values from an independent arbitrary-precision evaluation
        let map = ellipse_map(256);
        let refs = [
            (c(0.5, 0.0), c(0.638_980_213_806_505_96, 0.0)),
            (c(0.0, 0.3), c(0.0, 0.440_261_655_120_631_36)),
            (c(0.4, 0.2), c(0.552_380_708_259_126_07, 0.233_500_383_730_564_91)),
        ];
        for (z, w) in refs {
            assert!((map.eval(z).unwrap() - w).norm() < 1e-10, "{z}: {}", map.eval(z).unwrap());
        }
    }

    #[test]
    fn refinement_stability_and_cauchy_riemann() {
        let m1 = ellipse_map(256);
        let m2 = ellipse_map(512);
        for z in interior_probes(5, 50, 1.0, 0.6) {
            assert!((m1.eval(z).unwrap() - m2.eval(z).unwrap()).norm() < 1e-6);
        }
        let h = 1e-5;
        for z in interior_probes(6, 20, 1.0, 0.6) {
            let fx = (m1.eval(z + h).unwrap() - m1.eval(z - h).unwrap()) / (2.0 * h);
            let fy = (m1.eval(z + I * h).unwrap() - m1.eval(z - I * h).unwrap()) / (2.0 * h);
            assert!((fx + I * fy).norm() < 1e-5);
            assert!((fx - m1.derivative(z).unwrap()).norm() < 1e-5);
        }
    }

    #[test]
    fn rejections() {
        let e = DomainBoundary::ellipse(c(0.0, 0.0), 1.0, 0.6, 128);
        assert!(matches!(build_map(&e, c(2.0, 0.0)), Err(CrxError::CenterOutside(_))));
        let mut flat = e.clone();
        flat.smooth = false;
        assert!(matches!(build_map(&flat, c(0.0, 0.0)), Err(CrxError::FlatBoundary)));
        let map = build_map(&e, c(0.0, 0.0)).unwrap();
        assert!(matches!(map.eval(c(0.99999, 0.0)), Err(CrxError::TooCloseToBoundary(_))));
    }

    #[test]
    fn apply_to_matrix_routes() {
        use crate::linalg::{frobenius, random_complex_gaussian};
        let map = ellipse_map(256);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex_gaussian(&mut rng, 3) * C64::from(0.15);
        let r = map.apply_to_matrix(&a).unwrap();
        let contour = apply_function_contour(&map.boundary_values, &a, &map.boundary).unwrap();
        assert!(frobenius(&(&r.value - &contour.value)) < 1e-7 * (1.0 + frobenius(&r.value)));
        let s = ConformalMap::scale(2.0, 64);
        let big = CMat::identity(2, 2) * c(3.0, 0.0);
        assert!(matches!(s.apply_to_matrix(&big), Err(CrxError::MapDomainMismatch)));
    }
}
