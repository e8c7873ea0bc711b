//! The `crx` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::boundary_measures::{
    moment_check, mu_density, representation_check, w_measure_check, Grid, MeasureSummary, TestFunction,
};
use crate::conformal_map::MapOverride;
use crate::error::{CrxError, Result};
use crate::extremal_search::census::{degree_census, degree_fraction, write_census_csv};
use crate::extremal_search::{optimize_mapped, ExtremalResult, Mode, SearchConfig};
use crate::io::{read_matrix, read_zeros, write_atomic, write_json, write_matrix};
use crate::model_space::{condition_report, ModelSpaceSystem};
use crate::numerical_range::DEFAULT_NODES;
use crate::pipeline::{prepare, PipelineMeta};
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "crx", version, about = "Crouzeix-conjecture experiments: model spaces, numerical ranges, extremal Blaschke products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compressed shift, eigenvector matrices and condition report for a zero set.
    Mtheta(MthetaArgs),
    /// Extremal Blaschke product for a matrix on its numerical range.
    Extremal(ExtremalArgs),
    /// Apparent degrees of extremal functions for seeded random matrices.
    Census(CensusArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MthetaArgs {
    /// JSON list of zeros, each {"re": x, "im": y} or [x, y].
    #[arg(long)]
    pub zeros: PathBuf,
    /// Output directory for m_theta.json, x.json, xinv.json, condition_report.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Random starts of the multistart optimizer.
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    /// Boundary nodes of the numerical range.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Relative stopping tolerance of each local search.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Objective evaluations allowed per start.
    #[arg(long, default_value_t = 20_000)]
    pub max_evals: usize,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    /// Matrix JSON {"n": k, "re": [[..]], "im": [[..]]}.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Blaschke degree: a number, or auto for n - 1.
    #[arg(long, default_value = "auto")]
    pub degree: String,
    #[arg(long)]
    pub seed: u64,
    /// auto, identity or scale:<r>.
    #[arg(long, default_value = "auto")]
    pub map: MapOverride,
    /// norm or radius.
    #[arg(long, default_value = "norm")]
    pub mode: Mode,
    /// Also write the boundary density CSV and the measure checks.
    #[arg(long)]
    pub measures: bool,
    /// Density CSV path; defaults to <out stem>.density.csv.
    #[arg(long, requires = "measures")]
    pub density_csv: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only one suite: hyp_geometry, model_space, extremal_search,
    /// boundary_measures, matrix_functions or conformal_map.
    #[arg(long)]
    pub suite: Option<String>,
    /// Give one criterion an unreachable bound (fixture for testing the harness).
    #[arg(long, hide = true)]
    pub inject_failure: Option<u8>,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ExtremalOutput<'a> {
    #[serde(flatten)]
    result: &'a ExtremalResult,
    meta: PipelineMeta,
    measures: Option<MeasureSummary>,
}

fn search_config(s: &SearchArgs, seed: u64) -> Result<SearchConfig> {
    if s.starts == 0 {
        return Err(CrxError::Input("--starts must be positive".into()));
    }
    if !(s.tol > 0.0) {
        return Err(CrxError::Input("--tol must be positive".into()));
    }
    Ok(SearchConfig { starts: s.starts, seed, tol: s.tol, max_evals: s.max_evals })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn cmd_mtheta(args: &MthetaArgs) -> Result<()> {
    let zeros = read_zeros(&args.zeros)?;
    let report = condition_report(&zeros)?;
    let sys = ModelSpaceSystem::new(zeros)?;
    std::fs::create_dir_all(&args.out)?;
    write_matrix(&args.out.join("m_theta.json"), &sys.m_theta)?;
    write_matrix(&args.out.join("x.json"), &sys.x_mat)?;
    write_matrix(&args.out.join("xinv.json"), &sys.x_inv)?;
    write_json(&args.out.join("condition_report.json"), &report)?;
    eprintln!("n = {}, delta = {:.6e}, kappa = {:.6e}, all bounds hold: {}", report.n, report.delta, report.kappa_numeric, report.all_hold());
    Ok(())
}

fn measures(result: &ExtremalResult, prep: &crate::pipeline::Prepared, csv: &Path) -> Result<MeasureSummary> {
    let dens = mu_density(&result.phi_of_a, &result.vector, &prep.map)?;
    let mut buf = Vec::new();
    dens.write_csv(&mut buf)?;
    write_atomic(csv, &buf)?;
    let representation =
        representation_check(&dens, &prep.a, &result.phi_of_a, &result.vector, &TestFunction::default_set(), Some(result));
    let w_measure = match result.mode {
        Mode::Radius => Some(w_measure_check(result, &Grid::boundary(&prep.map))?),
        Mode::Norm => None,
    };
    Ok(MeasureSummary {
        total_mass: dens.total_mass,
        min_rho: dens.min_rho(),
        moment_deviation: moment_check(&dens, &result.phi_of_a, &result.vector, 10),
        representation,
        w_measure,
    })
}

pub fn cmd_extremal(args: &ExtremalArgs) -> Result<()> {
    let a = read_matrix(&args.matrix)?;
    let n = a.nrows();
    let degree = match args.degree.as_str() {
        "auto" => n - 1,
        d => d.parse().map_err(|_| CrxError::Input(format!("--degree must be auto or an integer, got {d:?}")))?,
    };
    let cfg = search_config(&args.search, args.seed)?;
    let prep = prepare(&a, args.search.nodes, args.map)?;
    let result = optimize_mapped(prep.phi(), degree, args.mode, &cfg)?;
    let measures = if args.measures {
        let csv = args.density_csv.clone().unwrap_or_else(|| with_suffix(&args.out, ".density.csv"));
        Some(measures(&result, &prep, &csv)?)
    } else {
        None
    };
    write_json(&args.out, &ExtremalOutput { result: &result, meta: prep.meta(), measures })?;
    eprintln!(
        "attained {:.12}, effective degree {} of {}, orthogonality residual {:.3e}",
        result.attained, result.effective_degree, result.degree, result.diagnostics.orthogonality_residual
    );
    Ok(())
}

pub fn cmd_census(args: &CensusArgs) -> Result<()> {
    if args.dim < 2 {
        return Err(CrxError::Input("--dim must be at least 2".into()));
    }
    let cfg = search_config(&args.search, args.seed)?;
    let rows = degree_census(args.dim, args.samples, args.seed, args.search.nodes, &cfg);
    let mut buf = Vec::new();
    write_census_csv(&rows, &mut buf)?;
    match &args.csv {
        Some(p) => write_atomic(p, &buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let shares: Vec<String> =
        (0..args.dim).map(|d| format!("{d}: {:.1}%", 100.0 * degree_fraction(&rows, d))).collect();
    eprintln!("effective degrees {}; {failed} failed rows", shares.join(", "));
    Ok(())
}

/// Returns whether every selected criterion passed.
pub fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let report = verify::run(&VerifyOptions { suite: args.suite.clone(), inject_failure: args.inject_failure })?;
    for c in &report.criteria {
        println!("{}", c.line());
        for note in &c.notes {
            println!("      note: {note}");
        }
    }
    if let Some(p) = &args.out {
        write_json(p, &report)?;
    }
    Ok(report.all_passed)
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("CRX_THREADS") {
        let n: usize = v.parse().map_err(|_| CrxError::Input(format!("CRX_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CrxError::Input("CRX_THREADS must be positive".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = init_threads().and_then(|()| match &cli.command {
        Command::Mtheta(a) => cmd_mtheta(a).map(|()| 0),
        Command::Extremal(a) => cmd_extremal(a).map(|()| 0),
        Command::Census(a) => cmd_census(a).map(|()| 0),
        Command::Verify(a) => cmd_verify(a).map(|ok| if ok { 0 } else { 1 }),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("crx: {e}");
            e.exit_code()
        }
    }
}
