//! Representation measures on `∂Ω` for extremal pairs: the density
//! `rho(e^{i theta}) = 2 Re<(I - e^{-i theta} Phi)^{-1} x, x> - 1`, the measure
//! `dmu = rho(phi) |phi'| |d zeta| / 2 pi`, its moments, and the measure `nu`
//! attached to a w-extremal pair.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::conformal_map::ConformalMap;
use crate::error::{CrxError, Result};
use crate::extremal_search::{ExtremalResult, Mode};
use crate::linalg::{eye, inner, inverse, spectral_radius, CMat, CVec, C64};
use crate::numerical_range::numerical_radius;

/// Sample points on `∂Ω` with their images in the unit circle and the
/// quadrature weight of `d theta / 2 pi` pulled back to each node.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nodes: Vec<C64>,
    pub disk_points: Vec<C64>,
    pub base_weights: Vec<f64>,
}

impl Grid {
    /// `m` uniform points of the unit circle.
    pub fn disk(m: usize) -> Self {
        let pts: Vec<C64> = (0..m).map(|k| C64::from_polar(1.0, TAU * k as f64 / m as f64)).collect();
        Grid { nodes: pts.clone(), disk_points: pts, base_weights: vec![1.0 / m as f64; m] }
    }

    /// Boundary nodes of the map with weights `|phi'| |zeta'| h / 2 pi`.
    pub fn boundary(map: &ConformalMap) -> Self {
        let m = map.boundary.len();
        let h = TAU / m as f64;
        let base_weights = map
            .boundary_derivs
            .iter()
            .zip(&map.boundary.tangents)
            .map(|(d, t)| d.norm() * t.norm() * h / TAU)
            .collect();
        Grid { nodes: map.boundary.nodes.clone(), disk_points: map.boundary_values.clone(), base_weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureDensity {
    /// `arg` of the disk point of each node.
    pub theta_grid: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub mu_weights: Vec<f64>,
    pub total_mass: f64,
    #[serde(skip)]
    pub nodes: Vec<C64>,
    #[serde(skip)]
    pub disk_points: Vec<C64>,
}

impl MeasureDensity {
    /// `sum_k h(zeta_k, phi(zeta_k)) w_k`
    pub fn integrate<H: Fn(C64, C64) -> C64>(&self, h: H) -> C64 {
        self.nodes
            .iter()
            .zip(&self.disk_points)
            .zip(&self.mu_weights)
            .map(|((&z, &u), &w)| h(z, u) * w)
            .sum()
    }

    pub fn min_rho(&self) -> f64 {
        self.rho_values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with columns `theta,rho,weight`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["theta", "rho", "weight"])?;
        for k in 0..self.rho_values.len() {
            wr.write_record(&[
                format!("{:.17e}", self.theta_grid[k]),
                format!("{:.17e}", self.rho_values[k]),
                format!("{:.17e}", self.mu_weights[k]),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn check_radius(phi: &CMat) -> Result<()> {
    let r = spectral_radius(phi);
    if !(r < 1.0 - 1e-6) {
        return Err(CrxError::SpectralRadiusTooLarge(r));
    }
    Ok(())
}

/// `<(I - conj(u) Phi)^{-1} p, q>` for `|u| = 1`.
fn resolvent_form(phi: &CMat, p: &CVec, q: &CVec, u: C64) -> C64 {
    let n = phi.nrows();
    let m = eye(n) - phi * (u.conj() / u.norm_sqr());
    let r = inverse(&m).expect("spectral radius below one");
    inner(&(r * p), q)
}

/// Density `2 Re<(I - conj(u) Phi)^{-1} p, q> - c0` sampled on a grid.
fn density_on_grid(phi: &CMat, p: &CVec, q: &CVec, c0: f64, grid: &Grid) -> MeasureDensity {
    let rho_values: Vec<f64> =
        grid.disk_points.par_iter().map(|&u| 2.0 * resolvent_form(phi, p, q, u).re - c0).collect();
    let mu_weights: Vec<f64> = rho_values.iter().zip(&grid.base_weights).map(|(r, w)| r * w).collect();
    MeasureDensity {
        theta_grid: grid.disk_points.iter().map(|u| u.arg().rem_euclid(TAU)).collect(),
        total_mass: mu_weights.iter().sum(),
        rho_values,
        mu_weights,
        nodes: grid.nodes.clone(),
        disk_points: grid.disk_points.clone(),
    }
}

/// `rho` on `m` uniform angles of the unit circle, weights `rho / m`.
pub fn rho_density(phi: &CMat, x: &CVec, m: usize) -> Result<MeasureDensity> {
    check_radius(phi)?;
    Ok(density_on_grid(phi, x, x, x.norm_squared(), &Grid::disk(m)))
}

/// `mu` on the boundary nodes of the map: `rho(phi(zeta_k)) |phi'| |zeta'| h / 2 pi`.
pub fn mu_density(phi: &CMat, x: &CVec, map: &ConformalMap) -> Result<MeasureDensity> {
    check_radius(phi)?;
    Ok(density_on_grid(phi, x, x, x.norm_squared(), &Grid::boundary(map)))
}

/// Largest `|int u^n dmu - <Phi^n x, x>|` over `n = 0 .. n_max`.
pub fn moment_check(density: &MeasureDensity, phi: &CMat, x: &CVec, n_max: usize) -> f64 {
    let mut pw = x.clone();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let exact = inner(&pw, x);
        let quad = density.integrate(|_, u| u.powu(n as u32));
        worst = worst.max((quad - exact).norm());
        pw = phi * pw;
    }
    worst
}

/// Sup distance between `rho` sampled on `m` and on `2m` uniform angles, over
/// the `m` shared angles.
pub fn grid_agreement(phi: &CMat, x: &CVec, m: usize) -> Result<f64> {
    let a = rho_density(phi, x, m)?;
    let b = rho_density(phi, x, 2 * m)?;
    Ok((0..m).map(|k| (a.rho_values[k] - b.rho_values[2 * k]).abs()).fold(0.0, f64::max))
}

/// Test functions for the representation identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TestFunction {
    /// `z^k` on `Ω`
    ZPower(u32),
    /// `phi^k`
    PhiPower(u32),
}

impl TestFunction {
    pub fn default_set() -> Vec<TestFunction> {
        let mut v: Vec<_> = (0..4).map(TestFunction::ZPower).collect();
        v.extend((1..4).map(TestFunction::PhiPower));
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RepresentationReport {
    pub deviations: Vec<(TestFunction, f64)>,
    pub max_deviation: f64,
    /// `|int f dmu|` for the extremal function, when given.
    pub f_integral_abs: Option<f64>,
}

/// `max |<h(A) x, x> - int h dmu|` over the tests; `f` adds `|int f dmu|`.
pub fn representation_check(
    density: &MeasureDensity,
    a: &CMat,
    phi: &CMat,
    x: &CVec,
    tests: &[TestFunction],
    f: Option<&ExtremalResult>,
) -> RepresentationReport {
    let deviations: Vec<(TestFunction, f64)> = tests
        .iter()
        .map(|&t| {
            let (mat, quad) = match t {
                TestFunction::ZPower(k) => (a.pow(k), density.integrate(|z, _| z.powu(k))),
                TestFunction::PhiPower(k) => (phi.pow(k), density.integrate(|_, u| u.powu(k))),
            };
            (t, (inner(&(mat * x), x) - quad).norm())
        })
        .collect();
    let max_deviation = deviations.iter().map(|d| d.1).fold(0.0, f64::max);
    let f_integral_abs = f.map(|r| {
        let b = r.blaschke();
        density.integrate(|_, u| b.eval(u)).norm()
    });
    RepresentationReport { deviations, max_deviation, f_integral_abs }
}

#[derive(Debug, Clone, Serialize)]
pub struct WMeasureReport {
    /// `nu(∂Ω) = <f(A) y, y>`
    pub total_mass: f64,
    pub numerical_radius: f64,
    pub mass_error: f64,
    pub f_integral: C64,
    pub f_integral_error: f64,
    pub min_density: f64,
    /// Largest `|int u^n dnu - <Phi^n f(A) y, y>|`, `n <= 10`.
    pub moment_deviation: f64,
    #[serde(skip)]
    pub density: MeasureDensity,
}

/// The measure `nu` with moments `<Phi^n f(A) y, y>` for a radius-mode result,
/// from the density `2 Re<(I - e^{-i theta} Phi)^{-1} f(A) y, y> - c0`.
pub fn w_measure_check(result: &ExtremalResult, grid: &Grid) -> Result<WMeasureReport> {
    if result.mode != Mode::Radius {
        return Err(CrxError::Input("w-measure needs a radius-mode result".into()));
    }
    let phi = &result.phi_of_a;
    check_radius(phi)?;
    let y = &result.vector;
    let fa = result.f_of_phi();
    let fy = &fa * y;
    let c0 = inner(&fy, y);
    let density = density_on_grid(phi, &fy, y, c0.re, grid);
    let w = numerical_radius(&fa);
    let b = result.blaschke();
    let f_integral = density.integrate(|_, u| b.eval(u));

    let mut pw = fy.clone();
    let mut moment_deviation = 0.0f64;
    for n in 0..=10u32 {
        let quad = density.integrate(|_, u| u.powu(n));
        moment_deviation = moment_deviation.max((quad - inner(&pw, y)).norm());
        pw = phi * pw;
    }
    Ok(WMeasureReport {
        total_mass: density.total_mass,
        numerical_radius: w,
        mass_error: (density.total_mass - w).abs(),
        f_integral,
        f_integral_error: (f_integral - 1.0).norm(),
        min_density: density.min_rho(),
        moment_deviation,
        density,
    })
}

/// Summary written next to the density CSV.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureSummary {
    pub total_mass: f64,
    pub min_rho: f64,
    pub moment_deviation: f64,
    pub representation: RepresentationReport,
    pub w_measure: Option<WMeasureReport>,
}
