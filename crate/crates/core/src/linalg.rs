//! Dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
pub use num_complex::Complex64 as C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Euclidean inner product `<x, y> = sum x_i conj(y_i)`.
pub fn inner(x: &CVec, y: &CVec) -> C64 {
    y.dotc(x)
}

/// `<A x, x>`
pub fn quad_form(a: &CMat, x: &CVec) -> C64 {
    inner(&(a * x), x)
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Operator 2-norm (largest singular value).
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest singular value together with a unit right singular vector.
pub fn top_singular(a: &CMat) -> (f64, CVec) {
    let svd = SVD::new(a.clone(), false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &s)| if s > best.1 { (i, s) } else { best });
    let v: CVec = v_t.row(k).adjoint();
    let nv = v.norm();
    (s, v / C64::from(nv))
}

/// Operator condition number `||A|| ||A^{-1}||` from the singular values.
pub fn cond(a: &CMat) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().lu().try_inverse()
}

/// Hermitian part `(A + A^*)/2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * C64::from(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(h.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(h.nrows(), h.ncols());
    for (dst, &src) in idx.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
pub fn hermitian_max(h: &CMat) -> (f64, CVec) {
    let (vals, vecs) = hermitian_eig(h);
    let k = vals.len() - 1;
    (vals[k], vecs.column(k).into_owned())
}

/// Eigenvalues of a general complex matrix via the complex Schur form.
pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let (_, t) = schur(a);
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Complex Schur form `A = Q T Q^*`.
///
/// The QR iteration in nalgebra uses a purely relative deflation test and can
/// stall on matrices with zero diagonal in the limit (nilpotent ones, for
/// instance). Such inputs are retried on `A + sigma I` with a generic shift,
/// which is subtracted from `T` afterwards.
pub fn schur(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let max_iter = 200 * n.max(1);
    if let Some(s) = a.clone().try_schur(f64::EPSILON, max_iter) {
        return s.unpack();
    }
    let scale = frobenius(a).max(f64::MIN_POSITIVE);
    let sigma = C64::new(0.613_512_6, 0.389_941_2) * scale;
    let shifted = a + CMat::identity(n, n) * sigma;
    let (q, mut t) = shifted
        .try_schur(f64::EPSILON, 50 * max_iter)
        .expect("shifted QR iteration converges")
        .unpack();
    for i in 0..n {
        t[(i, i)] -= sigma;
    }
    (q, t)
}

/// Eigen-decomposition `A = X diag(values) X^{-1}` with unit-norm columns of `X`,
/// computed by back substitution on the complex Schur form.
pub fn eig(a: &CMat) -> (Vec<C64>, CMat) {
    let n = a.nrows();
    let (q, t) = schur(a);
    let scale = frobenius(&t).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let mut v = CMat::zeros(n, n);
    for k in 0..n {
        let lam = t[(k, k)];
        v[(k, k)] = C64::from(1.0);
        for i in (0..k).rev() {
            let mut s = C64::from(0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * v[(j, k)];
            }
            let mut d = t[(i, i)] - lam;
            if d.norm() < tiny {
                d = C64::from(tiny);
            }
            v[(i, k)] = -s / d;
        }
    }
    let mut x = q * v;
    for k in 0..n {
        let nk = x.column(k).norm();
        if nk > 0.0 {
            x.column_mut(k).scale_mut(1.0 / nk);
        }
    }
    let vals = (0..n).map(|i| t[(i, i)]).collect();
    (vals, x)
}

pub fn diag(values: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(values))
}

/// Spectral radius.
pub fn spectral_radius(a: &CMat) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn from_rows(rows: &[Vec<C64>]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| rows[i][j])
}

pub fn unit(x: &CVec) -> CVec {
    let n = x.norm();
    x / C64::from(n)
}

/// Pairwise (tree) summation of complex matrices; deterministic for a fixed
/// input order regardless of how the terms were produced.
pub fn tree_sum(mut terms: Vec<CMat>) -> Option<CMat> {
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len().div_ceil(2));
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop()
}

pub fn random_complex_gaussian<R: rand::Rng>(rng: &mut R, n: usize) -> CMat {
    use rand_distr::{Distribution, StandardNormal};
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re * s, im * s)
    })
}
