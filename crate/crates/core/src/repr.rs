//! Irreducible representations of SU(2) in the weight basis, their
//! complexified evaluation, weight projectors and a Haar quadrature rule.
//!
//! The basis of `V_λ` is ordered by decreasing weight, `λ, λ-2, ..., -λ`.

use crate::algebra::{su2_from_ab, CartanElement, GeometryError, GroupElement, LieElement};
use crate::lie::{GroupData, Weight};
use crate::linalg::{self, c, CMat, I};
use crate::quadrature;
use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

/// Endomorphism of a representation space.
pub type EndMatrix = CMat;

#[derive(Clone, Debug)]
pub struct Irrep {
    pub lambda: Weight,
    pub dim: usize,
    pub weights: Vec<Weight>,
    /// `dπ(E_k)` for the orthonormal basis of k used by [`LieElement`].
    pub generators: Vec<CMat>,
}

/// Spin matrices `J_1, J_2, J_3` for spin `λ/2`.
fn spin_matrices(lambda: usize) -> [CMat; 3] {
    let d = lambda + 1;
    let j = lambda as f64 / 2.0;
    let mut jp = CMat::zeros(d, d);
    for k in 1..d {
        // index k has m = j - k; J+ raises it to index k - 1
        let m = j - k as f64;
        jp[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm).map(|z| z * 0.5);
    let j2 = (&jp - &jm).map(|z| z * c(0.0, -0.5));
    let j3 = CMat::from_diagonal(&DVector::from_iterator(d, (0..d).map(|k| c(j - k as f64, 0.0))));
    [j1, j2, j3]
}

pub fn build_irrep(g: &GroupData, lambda: &Weight) -> Result<Irrep, GeometryError> {
    if g.rank != 1 {
        return Err(GeometryError::Unsupported(format!("representations of {}", g.id)));
    }
    if lambda.0.len() != 1 || lambda.0[0] < 0 {
        return Err(GeometryError::Unsupported(format!("weight {:?}", lambda.0)));
    }
    let l = lambda.0[0] as usize;
    let generators = spin_matrices(l)
        .iter()
        .map(|jk| jk.map(|z| z * c(0.0, -SQRT_2)))
        .collect();
    let weights = (0..=l).map(|k| Weight(vec![l as i64 - 2 * k as i64])).collect();
    Ok(Irrep { lambda: lambda.clone(), dim: l + 1, weights, generators })
}

impl Irrep {
    pub fn highest(&self) -> i64 {
        self.lambda.0[0]
    }

    /// `dπ(X)`
    pub fn d_rep(&self, x: &LieElement) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (v, gk) in x.coords.iter().zip(&self.generators) {
            m += gk * c(*v, 0.0);
        }
        m
    }

    /// Images of the Chevalley triple `e, f, h` under the complex-linear
    /// extension of `dπ`.
    pub fn chevalley(&self) -> (CMat, CMat, CMat) {
        // σ_k = i√2 E_k, e = (σ1 + iσ2)/2, f = (σ1 - iσ2)/2, h = σ3
        let s: Vec<CMat> = self.generators.iter().map(|g| g * c(0.0, SQRT_2)).collect();
        let e = (&s[0] + &s[1] * I) * c(0.5, 0.0);
        let f = (&s[0] - &s[1] * I) * c(0.5, 0.0);
        (e, f, s[2].clone())
    }

    pub fn index_of(&self, nu: &Weight) -> Option<usize> {
        self.weights.iter().position(|w| w == nu)
    }
}

/// Principal logarithm of an SU(2) element, as a Lie algebra element.
pub fn su2_log(x: &GroupElement) -> LieElement {
    // x = cos φ - i sin φ (n·σ), and E_k = -iσ_k/√2, so x = exp(√2 φ n·E)
    let m = &x.m;
    let cos_phi = 0.5 * linalg::trace(m).re;
    let herm = (m - m.adjoint()).map(|z| z * I * 0.5);
    let sig = pauli();
    let w: Vec<f64> = sig.iter().map(|s| 0.5 * (s * &herm).trace().re).collect();
    let sin_phi = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let phi = sin_phi.atan2(cos_phi);
    if sin_phi < 1e-300 {
        let mut l = LieElement::zero(2);
        if cos_phi < 0.0 {
            l.coords[2] = SQRT_2 * PI;
        }
        return l;
    }
    LieElement { n: 2, coords: w.iter().map(|v| SQRT_2 * phi * v / sin_phi).collect() }
}

pub fn pauli() -> [CMat; 3] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// `π_λ(x)` via the exponential lift of the defining representation.
pub fn rep_element(ir: &Irrep, x: &GroupElement) -> CMat {
    let l = su2_log(x);
    linalg::expm_anti_hermitian(&ir.d_rep(&l))
}

/// `π_λ(x e^{iY}) = π_λ(x) exp(i dπ_λ(Y))`.
pub fn rep_complexified(ir: &Irrep, x: &GroupElement, y: &LieElement) -> CMat {
    let h = ir.d_rep(y).map(|z| z * I);
    rep_element(ir, x) * linalg::expm_hermitian(&h)
}

/// `exp(i dπ(Y))` for a Cartan element: diagonal with entries `e^{<ν, Y>}`.
pub fn cartan_exponential(g: &GroupData, ir: &Irrep, y: &CartanElement) -> CMat {
    let d = DVector::from_iterator(ir.dim, ir.weights.iter().map(|w| c(y.pair(g, &w.as_f64()).exp(), 0.0)));
    CMat::from_diagonal(&d)
}

pub fn weight_projector(ir: &Irrep, nu: &Weight) -> EndMatrix {
    let mut p = CMat::zeros(ir.dim, ir.dim);
    if let Some(k) = ir.index_of(nu) {
        p[(k, k)] = c(1.0, 0.0);
    }
    p
}

/// Tensor-product matrix unit `E_ij`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> EndMatrix {
    let mut m = CMat::zeros(d, d);
    m[(i, j)] = c(1.0, 0.0);
    m
}

/// Product rule for normalized Haar measure on SU(2), exact for polynomials
/// of total degree at most `2 * order` in the matrix entries and their
/// conjugates.
pub fn haar_quadrature(g: &GroupData, order: usize) -> Result<Vec<(GroupElement, f64)>, GeometryError> {
    if g.rank != 1 {
        return Err(GeometryError::Unsupported(format!("Haar quadrature on {}", g.id)));
    }
    let order = order.max(1);
    let us = quadrature::gauss_legendre_on(order, 0.0, 1.0);
    let m = 2 * order + 1;
    let angles = quadrature::periodic(m, 2.0 * PI);
    let mut out = Vec::with_capacity(order * m * m);
    for &(u, wu) in &us {
        for &(p1, w1) in &angles {
            for &(p2, w2) in &angles {
                let a = Complex64::from_polar((1.0 - u).sqrt(), p1);
                let b = Complex64::from_polar(u.sqrt(), p2);
                let w = wu * w1 * w2 / (4.0 * PI * PI);
                out.push((GroupElement::new(su2_from_ab(a, b)), w));
            }
        }
    }
    Ok(out)
}

/// `∫_K f(x) dx` with the rule above and pairwise summation.
pub fn haar_integrate(rule: &[(GroupElement, f64)], f: impl Fn(&GroupElement) -> Complex64) -> Complex64 {
    let terms: Vec<Complex64> = rule.iter().map(|(x, w)| f(x) * *w).collect();
    quadrature::tree_sum_complex(&terms)
}

pub fn character(ir: &Irrep, x: &GroupElement) -> Complex64 {
    linalg::trace(&rep_element(ir, x))
}
