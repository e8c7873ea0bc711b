//! Apparent degrees of norm-extremal Blaschke products for random matrices,
//! and the perturbed-Crabb experiment.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conformal_map::MapOverride;
use crate::error::Result;
use crate::linalg::{op_norm, random_complex_gaussian, CMat};
use crate::matrix_functions::crabb_matrix;
use crate::pipeline::prepare;

use super::{optimize_mapped, ExtremalResult, Mode, SearchConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub dim: usize,
    pub sample_index: usize,
    /// Seed of the matrix generator for this row.
    pub seed: u64,
    pub effective_degree: Option<usize>,
    pub attained_norm: Option<f64>,
    pub crouzeix_ratio: Option<f64>,
    pub max_root_modulus: Option<f64>,
    pub orthogonality_residual: Option<f64>,
    pub converged: Option<bool>,
    pub error: Option<String>,
}

/// Seed of sample `i` in a census started from `seed`.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
}

/// Standard complex Gaussian matrix of sample `i`.
pub fn census_matrix(n: usize, seed: u64, i: usize) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i));
    random_complex_gaussian(&mut rng, n)
}

/// `||B(Phi)|| / max |B(phi(zeta_k))|` over the boundary nodes.
fn ratio(res: &ExtremalResult, boundary_values: &[crate::linalg::C64]) -> f64 {
    let b = res.blaschke();
    let sup = boundary_values.iter().map(|&w| b.eval(w).norm()).fold(0.0, f64::max);
    res.attained / sup
}

fn census_row(n: usize, seed: u64, i: usize, nodes: usize, config: &SearchConfig) -> CensusRow {
    let a = census_matrix(n, seed, i);
    let mut row = CensusRow {
        dim: n,
        sample_index: i,
        seed: sample_seed(seed, i),
        effective_degree: None,
        attained_norm: None,
        crouzeix_ratio: None,
        max_root_modulus: None,
        orthogonality_residual: None,
        converged: None,
        error: None,
    };
    let run = || -> Result<(ExtremalResult, f64)> {
        let prep = prepare(&a, nodes, MapOverride::Auto)?;
        let cfg = SearchConfig { seed: sample_seed(seed, i), ..*config };
        let res = optimize_mapped(prep.phi(), n - 1, Mode::Norm, &cfg)?;
        let r = ratio(&res, &prep.map.boundary_values);
        Ok((res, r))
    };
    match run() {
        Ok((res, r)) => {
            row.effective_degree = Some(res.effective_degree);
            row.attained_norm = Some(res.attained);
            row.crouzeix_ratio = Some(r);
            row.max_root_modulus = Some(res.roots.iter().map(|z| z.norm()).fold(0.0, f64::max));
            row.orthogonality_residual = Some(res.diagnostics.orthogonality_residual);
            row.converged = Some(res.diagnostics.converged);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// One row per seeded standard complex Gaussian `n x n` matrix: range, map,
/// degree `n - 1` norm search, apparent degree by the 0.9999 rule.
pub fn degree_census(n: usize, samples: usize, seed: u64, nodes: usize, config: &SearchConfig) -> Vec<CensusRow> {
    (0..samples).into_par_iter().map(|i| census_row(n, seed, i, nodes, config)).collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn optf(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.17e}")).unwrap_or_default()
}

pub fn write_census_csv<W: Write>(rows: &[CensusRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "dim",
        "sample_index",
        "seed",
        "effective_degree",
        "attained_norm",
        "crouzeix_ratio",
        "max_root_modulus",
        "orthogonality_residual",
        "converged",
        "error",
    ])?;
    for r in rows {
        wr.write_record(&[
            r.dim.to_string(),
            r.sample_index.to_string(),
            r.seed.to_string(),
            opt(&r.effective_degree),
            optf(r.attained_norm),
            optf(r.crouzeix_ratio),
            optf(r.max_root_modulus),
            optf(r.orthogonality_residual),
            opt(&r.converged),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Share of successful rows with the given effective degree.
pub fn degree_fraction(rows: &[CensusRow], degree: usize) -> f64 {
    let ok: Vec<_> = rows.iter().filter_map(|r| r.effective_degree).collect();
    if ok.is_empty() {
        return 0.0;
    }
    ok.iter().filter(|&&d| d == degree).count() as f64 / ok.len() as f64
}

#[derive(Debug, Clone, Serialize)]
pub struct OpensetRow {
    pub index: usize,
    pub perturbation_norm: f64,
    pub effective_degree: Option<usize>,
    pub attained: Option<f64>,
    pub error: Option<String>,
}

/// Crabb matrix plus seeded complex Gaussian perturbations scaled to operator
/// norm `size`, each searched at degree `n - 1`.
pub fn openset_experiment(n: usize, count: usize, size: f64, seed: u64, nodes: usize, config: &SearchConfig) -> Vec<OpensetRow> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, k));
            let e = random_complex_gaussian(&mut rng, n);
            let e = &e * crate::linalg::C64::from(size / op_norm(&e));
            let a = crabb_matrix(n) + &e;
            let run = || -> Result<ExtremalResult> {
                let prep = prepare(&a, nodes, MapOverride::Auto)?;
                optimize_mapped(prep.phi(), n - 1, Mode::Norm, config)
            };
            match run() {
                Ok(r) => OpensetRow {
                    index: k,
                    perturbation_norm: op_norm(&e),
                    effective_degree: Some(r.effective_degree),
                    attained: Some(r.attained),
                    error: None,
                },
                Err(err) => OpensetRow {
                    index: k,
                    perturbation_norm: op_norm(&e),
                    effective_degree: None,
                    attained: None,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect()
}
