//! Representation measure of an extremal pair, written as CSV to stdout.

use crouzeix_lab::boundary_measures::{moment_check, mu_density, representation_check, TestFunction};
use crouzeix_lab::conformal_map::MapOverride;
use crouzeix_lab::extremal_search::census::census_matrix;
use crouzeix_lab::extremal_search::{optimize_mapped, Mode, SearchConfig};
use crouzeix_lab::pipeline::prepare;

fn main() -> crouzeix_lab::Result<()> {
    let a = census_matrix(3, 7, 0);
    let prep = prepare(&a, 256, MapOverride::Auto)?;
    let r = optimize_mapped(prep.phi(), 2, Mode::Norm, &SearchConfig { seed: 42, ..SearchConfig::default() })?;
    let dens = mu_density(&r.phi_of_a, &r.vector, &prep.map)?;
    let rep = representation_check(&dens, &a, &r.phi_of_a, &r.vector, &TestFunction::default_set(), Some(&r));
    eprintln!("||f(A)|| = {:.8}, effective degree {}", r.attained, r.effective_degree);
    eprintln!("mass {:.12}, min rho {:.3e}", dens.total_mass, dens.min_rho());
    eprintln!("moment deviation {:.2e}", moment_check(&dens, &r.phi_of_a, &r.vector, 10));
    eprintln!("representation deviation {:.2e}, |int f dmu| = {:.2e}", rep.max_deviation, rep.f_integral_abs.unwrap_or(f64::NAN));
    dens.write_csv(std::io::stdout())
}
