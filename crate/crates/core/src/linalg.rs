//! Small dense complex linear algebra on top of nalgebra.
//!
//! Every matrix exponential needed by the crate has an (anti-)Hermitian
//! argument, so all of them go through the Hermitian eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn trace(m: &CMat) -> Complex64 {
    m.trace()
}

/// Frobenius norm of `a - b`.
pub fn dist(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    dist(m, &m.adjoint()) <= tol
}

pub fn unitarity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    dist(&(m.adjoint() * m), &identity(n))
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// decreasing order. Columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    // symmetrize against rounding drift before handing to the solver
    let hs = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(hs);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (values, vecs)
}

/// Applies a real scalar function to a Hermitian matrix by spectral calculus.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let (vals, v) = hermitian_eigen(h);
    let d = DVector::from_iterator(vals.len(), vals.iter().map(|&x| f(x)));
    &v * CMat::from_diagonal(&d) * v.adjoint()
}

/// `exp(h)` for Hermitian `h`; the result is positive definite.
pub fn expm_hermitian(h: &CMat) -> CMat {
    hermitian_fn(h, |x| c(x.exp(), 0.0))
}

/// `exp(x)` for anti-Hermitian `x`; the result is unitary.
pub fn expm_anti_hermitian(x: &CMat) -> CMat {
    // x = -i H with H = i x Hermitian
    let h = x.map(|z| z * I);
    hermitian_fn(&h, |l| Complex64::from_polar(1.0, -l))
}

/// Truncated power series of `exp`, used only as a test oracle.
pub fn expm_series(m: &CMat, terms: usize) -> CMat {
    let n = m.nrows();
    let mut acc = identity(n);
    let mut term = identity(n);
    for k in 1..terms {
        term = &term * m / c(k as f64, 0.0);
        acc += &term;
    }
    acc
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Determinant of a small complex matrix by LU.
pub fn det(m: &CMat) -> Complex64 {
    m.clone().determinant()
}

/// Real symmetric square root of a positive-definite real matrix.
pub fn sym_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let d = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}
