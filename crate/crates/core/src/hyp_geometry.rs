//! Pseudohyperbolic geometry of the unit disk: distances, separation
//! constants, finite Blaschke products and the Earl interpolation constant.

use serde::{Deserialize, Serialize};

use crate::error::{CrxError, Result};
use crate::linalg::{eye, inverse, CMat, C64};

/// Points closer than this are treated as coincident.
pub const DISTINCT_TOL: f64 = 1e-12;

/// A point strictly inside the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(C64);

impl DiskPoint {
    pub fn new(z: C64) -> Result<Self> {
        if !(z.norm() < 1.0 - 1e-14) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(CrxError::NotInDisk(format!("{z}")));
        }
        Ok(DiskPoint(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(C64::new(re, im))
    }

    pub fn value(self) -> C64 {
        self.0
    }

    pub fn many(values: &[C64]) -> Result<Vec<DiskPoint>> {
        values.iter().map(|&z| DiskPoint::new(z)).collect()
    }
}

impl From<DiskPoint> for C64 {
    fn from(p: DiskPoint) -> C64 {
        p.0
    }
}

/// `|(z - w) / (1 - conj(w) z)|`
pub fn pseudo_distance(z: DiskPoint, w: DiskPoint) -> f64 {
    pseudo_distance_raw(z.0, w.0)
}

pub(crate) fn pseudo_distance_raw(z: C64, w: C64) -> f64 {
    ((z - w) / (1.0 - w.conj() * z)).norm()
}

/// The single disk automorphism factor `(z - a)/(1 - conj(a) z)`.
pub fn blaschke_factor(a: C64, z: C64) -> C64 {
    (z - a) / (1.0 - a.conj() * z)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub delta: f64,
    pub per_point_deltas: Vec<f64>,
    pub argmin_index: usize,
}

pub fn check_distinct(points: &[C64]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() < DISTINCT_TOL {
                return Err(CrxError::DuplicatePoint(i, j));
            }
        }
    }
    Ok(())
}

/// Separation constant `min_j prod_{k != j} rho(z_j, z_k)` of a finite point set.
pub fn separation_constant(points: &[DiskPoint]) -> Result<SeparationReport> {
    if points.len() < 2 {
        return Err(CrxError::Input("separation constant needs at least two points".into()));
    }
    let raw: Vec<C64> = points.iter().map(|p| p.0).collect();
    check_distinct(&raw)?;
    let per_point_deltas: Vec<f64> = (0..raw.len())
        .map(|j| {
            (0..raw.len())
                .filter(|&k| k != j)
                .map(|k| pseudo_distance_raw(raw[j], raw[k]))
                .product()
        })
        .collect();
    let (argmin_index, delta) = per_point_deltas
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, d)| if d < b.1 { (i, d) } else { b });
    Ok(SeparationReport { delta, per_point_deltas, argmin_index })
}

/// Earl's interpolation constant `M(delta) = (1/delta + sqrt(1/delta^2 - 1))^2`,
/// evaluated as `((1 + sqrt((1-delta)(1+delta))) / delta)^2`.
pub fn earl_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(CrxError::OutOfRange { what: "delta", value: delta });
    }
    let root = ((1.0 - delta) * (1.0 + delta)).sqrt();
    let t = (1.0 + root) / delta;
    Ok(t * t)
}

/// Finite Blaschke product `c * prod_j (z - a_j)/(1 - conj(a_j) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    roots: Vec<DiskPoint>,
    constant: C64,
}

impl BlaschkeProduct {
    pub fn new(roots: Vec<DiskPoint>, constant: C64) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > 1e-14 {
            return Err(CrxError::OutOfRange { what: "|unimodular constant|", value: constant.norm() });
        }
        Ok(BlaschkeProduct { roots, constant })
    }

    pub fn from_roots(roots: &[C64]) -> Result<Self> {
        Self::new(DiskPoint::many(roots)?, C64::from(1.0))
    }

    /// Unimodular constant, degree zero.
    pub fn constant(c: C64) -> Result<Self> {
        Self::new(Vec::new(), c)
    }

    pub fn unit() -> Self {
        BlaschkeProduct { roots: Vec::new(), constant: C64::from(1.0) }
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> Vec<C64> {
        self.roots.iter().map(|p| p.0).collect()
    }

    pub fn unimodular_constant(&self) -> C64 {
        self.constant
    }

    pub fn with_constant(&self, c: C64) -> Result<Self> {
        Self::new(self.roots.clone(), c)
    }

    /// Evaluate at a point of the closed disk.
    pub fn eval(&self, z: C64) -> C64 {
        self.roots.iter().fold(self.constant, |acc, a| acc * blaschke_factor(a.0, z))
    }

    /// Pointwise product; roots are concatenated.
    pub fn multiply(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        BlaschkeProduct { roots, constant: self.constant * other.constant }
    }

    /// `B(M) = c prod_j (M - a_j I)(I - conj(a_j) M)^{-1}` for a matrix whose
    /// spectrum lies in the open disk.
    pub fn eval_matrix(&self, m: &CMat) -> CMat {
        eval_blaschke_matrix(&self.roots(), self.constant, m)
    }
}

/// Matrix Blaschke evaluation with roots in the closed disk; requires the
/// spectral radius of `m` to be below one so every factor is invertible.
pub fn eval_blaschke_matrix(roots: &[C64], constant: C64, m: &CMat) -> CMat {
    let n = m.nrows();
    let id = eye(n);
    let mut acc = id.clone() * constant;
    for &a in roots {
        let num = m - &id * a;
        let den = &id - m * a.conj();
        let inv = inverse(&den).expect("I - conj(a) M is invertible for spectral radius < 1");
        acc = acc * num * inv;
    }
    acc
}

/// All ordered two-way splits `(B1, B2)` of the root multiset with
/// `B1 * B2 = B`; the unimodular constant is carried by `B1`.
pub fn blaschke_factorizations(b: &BlaschkeProduct) -> Vec<(BlaschkeProduct, BlaschkeProduct)> {
    let d = b.degree();
    (0..(1usize << d))
        .rev()
        .map(|mask| {
            let mut first = Vec::new();
            let mut second = Vec::new();
            for (k, r) in b.roots.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    first.push(*r);
                } else {
                    second.push(*r);
                }
            }
            (
                BlaschkeProduct { roots: first, constant: b.constant },
                BlaschkeProduct { roots: second, constant: C64::from(1.0) },
            )
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct WirePoint {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct WireBlaschke {
    c_re: f64,
    c_im: f64,
    roots: Vec<WirePoint>,
}

impl Serialize for BlaschkeProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireBlaschke {
            c_re: self.constant.re,
            c_im: self.constant.im,
            roots: self.roots.iter().map(|p| WirePoint { re: p.0.re, im: p.0.im }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlaschkeProduct {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireBlaschke::deserialize(d)?;
        let roots = w
            .roots
            .iter()
            .map(|p| DiskPoint::from_parts(p.re, p.im))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        BlaschkeProduct::new(roots, C64::new(w.c_re, w.c_im)).map_err(serde::de::Error::custom)
    }
}
