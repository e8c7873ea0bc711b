//! ||p(A)|| / sup over W(A) of |p| for random matrices and polynomials,
//! next to the two-sided check with the conjugate Cauchy transform.

use crouzeix_lab::linalg::{c, random_complex_gaussian};
use crouzeix_lab::matrix_functions::{crouzeix_ratio, stronger_conjecture_check, Polynomial};
use crouzeix_lab::numerical_range::range_boundary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> crouzeix_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!("sample,ratio,holds_cp,holds_strong");
    for k in 0..20 {
        let a = random_complex_gaussian(&mut rng, 4);
        let p = Polynomial::new((0..4).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect());
        let bnd = range_boundary(&a, 256)?;
        let fvals: Vec<_> = bnd.nodes.iter().map(|&z| p.eval(z)).collect();
        let ratio = crouzeix_ratio(&p.eval_matrix(&a), |z| p.eval(z), &bnd)?;
        match stronger_conjecture_check(&fvals, &a, &bnd) {
            Ok(s) => println!("{k},{ratio:.8},{},{}", s.holds_cp, s.holds_strong),
            Err(e) => eprintln!("sample {k} skipped: {e}"),
        }
    }
    Ok(())
}
