//! Matrix realizations of k = su(n), its dual and the group.
//!
//! k* is identified with traceless Hermitian matrices: `H` acts on an
//! anti-Hermitian `X` by `<H, X> = i tr(H X)`. With this identification the
//! metric dual of `H` is `-iH`, and the trace form `tr(H H')` restricted to
//! diagonal matrices is the invariant form on weight coordinates.

use crate::lie::{ChamberPoint, GroupData, REGULARITY_THRESHOLD};
use crate::linalg::{self, c, CMat, I};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point is singular: smallest root pairing {0:e} below threshold")]
    Singular(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("vanishing denominator {0:e}")]
    Vanishing(f64),
}

/// Orthonormal Hermitian basis of traceless n×n matrices, `tr(H_k H_l) = δ_kl`.
/// For n = 2 this is `σ_k / √2`.
pub fn hermitian_basis(n: usize) -> Vec<CMat> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sym = CMat::zeros(n, n);
            sym[(i, j)] = c(s, 0.0);
            sym[(j, i)] = c(s, 0.0);
            let mut asym = CMat::zeros(n, n);
            asym[(i, j)] = c(0.0, -s);
            asym[(j, i)] = c(0.0, s);
            out.push(sym);
            out.push(asym);
        }
    }
    for k in 1..n {
        let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
        let mut d = CMat::zeros(n, n);
        for i in 0..k {
            d[(i, i)] = c(norm, 0.0);
        }
        d[(k, k)] = c(-(k as f64) * norm, 0.0);
        out.push(d);
    }
    out
}

/// Element of k in the orthonormal basis `E_k = -i H_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement {
    pub n: usize,
    pub coords: Vec<f64>,
}

impl LieElement {
    pub fn zero(n: usize) -> Self {
        LieElement { n, coords: vec![0.0; n * n - 1] }
    }

    pub fn to_matrix(&self) -> CMat {
        let basis = hermitian_basis(self.n);
        let mut m = CMat::zeros(self.n, self.n);
        for (v, h) in self.coords.iter().zip(&basis) {
            m += h * c(0.0, -v);
        }
        m
    }

    pub fn from_matrix(x: &CMat) -> Self {
        let n = x.nrows();
        let coords = hermitian_basis(n)
            .iter()
            .map(|h| (I * (h * x).trace()).re)
            .collect();
        LieElement { n, coords }
    }

    pub fn scale(&self, a: f64) -> Self {
        LieElement { n: self.n, coords: self.coords.iter().map(|v| a * v).collect() }
    }

    pub fn add(&self, o: &LieElement) -> Self {
        LieElement { n: self.n, coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn random(n: usize, scale: f64, rng: &mut impl Rng) -> Self {
        let coords = (0..n * n - 1).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect();
        LieElement { n, coords }
    }
}

/// Element of k* as a traceless Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FullDualElement {
    pub h: CMat,
}

impl FullDualElement {
    pub fn new(h: CMat) -> Self {
        FullDualElement { h }
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn coords(&self) -> Vec<f64> {
        hermitian_basis(self.n()).iter().map(|b| (b * &self.h).trace().re).collect()
    }

    pub fn from_coords(n: usize, u: &[f64]) -> Self {
        let mut h = CMat::zeros(n, n);
        for (v, b) in u.iter().zip(hermitian_basis(n)) {
            h += b * c(*v, 0.0);
        }
        FullDualElement { h }
    }

    /// `<ξ, X> = i tr(H X)`
    pub fn pair(&self, x: &LieElement) -> f64 {
        (I * (&self.h * x.to_matrix()).trace()).re
    }

    pub fn metric_dual(&self) -> LieElement {
        LieElement { n: self.n(), coords: self.coords() }
    }

    pub fn norm_sq(&self) -> f64 {
        (&self.h * &self.h).trace().re
    }

    /// Coadjoint action `Ad*_x ξ`.
    pub fn conjugate(&self, x: &GroupElement) -> Self {
        FullDualElement { h: &x.m * &self.h * x.m.adjoint() }
    }

    /// The diagonal element with chamber coordinates `s`.
    pub fn from_chamber(n: usize, s: &[f64]) -> Self {
        let e = diag_from_weight_coords(n, s);
        FullDualElement { h: CMat::from_diagonal(&nalgebra::DVector::from_iterator(n, e.iter().map(|&v| c(v, 0.0)))) }
    }

    pub fn random(n: usize, scale: f64, rng: &mut impl Rng) -> Self {
        let u: Vec<f64> = (0..n * n - 1).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect();
        Self::from_coords(n, &u)
    }

    pub fn add(&self, o: &FullDualElement) -> Self {
        FullDualElement { h: &self.h + &o.h }
    }

    pub fn scale(&self, a: f64) -> Self {
        FullDualElement { h: self.h.map(|z| z * a) }
    }
}

/// Diagonal entries (traceless) whose consecutive differences are `s`.
pub fn diag_from_weight_coords(n: usize, s: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; n];
    for i in 1..n {
        e[i] = e[i - 1] - s[i - 1];
    }
    let mean = e.iter().sum::<f64>() / n as f64;
    e.iter().map(|v| v - mean).collect()
}

/// Element of t, stored through its metric dual in weight coordinates:
/// `<ν, Y> = ν^T G y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanElement {
    pub y: Vec<f64>,
}

impl CartanElement {
    pub fn new(y: Vec<f64>) -> Self {
        CartanElement { y }
    }

    /// `<ν, Y>` for a weight-coordinate vector ν.
    pub fn pair(&self, g: &GroupData, nu: &[f64]) -> f64 {
        g.pair(nu, &self.y)
    }

    /// The anti-Hermitian diagonal matrix `-i diag(e(y))`.
    pub fn to_lie(&self, n: usize) -> LieElement {
        LieElement::from_matrix(&FullDualElement::from_chamber(n, &self.y).h.map(|z| z * c(0.0, -1.0)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub m: CMat,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { m: linalg::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn new(m: CMat) -> Self {
        GroupElement { m }
    }

    pub fn mul(&self, o: &GroupElement) -> Self {
        GroupElement { m: &self.m * &o.m }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { m: self.m.adjoint() }
    }

    pub fn exp(x: &LieElement) -> Self {
        GroupElement { m: linalg::expm_anti_hermitian(&x.to_matrix()) }
    }

    /// Torus element `diag(e^{iθ_1}, ..., e^{iθ_n})` with `Σθ = 0` enforced on
    /// the last entry.
    pub fn torus(angles: &[f64]) -> Self {
        let n = angles.len() + 1;
        let mut th: Vec<f64> = angles.to_vec();
        th.push(-angles.iter().sum::<f64>());
        let d = nalgebra::DVector::from_iterator(n, th.iter().map(|&a| Complex64::from_polar(1.0, a)));
        GroupElement { m: CMat::from_diagonal(&d) }
    }

    /// Haar-random element of SU(n).
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        if n == 2 {
            let q: Vec<f64> = (0..4).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let r = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            let a = c(q[0] / r, q[1] / r);
            let b = c(q[2] / r, q[3] / r);
            return GroupElement { m: su2_from_ab(a, b) };
        }
        let z = CMat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for k in 0..n {
            let ph = r[(k, k)] / r[(k, k)].norm();
            let mut col = q.column_mut(k);
            col *= ph;
        }
        let d = linalg::det(&q);
        let fix = Complex64::from_polar(1.0, -d.arg() / n as f64);
        q *= fix;
        GroupElement { m: q }
    }

    pub fn det(&self) -> Complex64 {
        linalg::det(&self.m)
    }
}

/// `[[a, -b̄], [b, ā]]`
pub fn su2_from_ab(a: Complex64, b: Complex64) -> CMat {
    CMat::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Eigen-decomposition `H = x₂ diag(e) x₂⁻¹` with decreasing `e`, `x₂ ∈ SU(n)`
/// and the gauge: the first nonvanishing entry of each of the first `n-1`
/// columns is real positive; the last column is fixed by `det x₂ = 1`.
pub fn diagonalize(xi: &FullDualElement) -> (Vec<f64>, GroupElement) {
    let n = xi.n();
    let (vals, mut v) = linalg::hermitian_eigen(&xi.h);
    for k in 0..n - 1 {
        let col = v.column(k).clone_owned();
        let scale = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(z) = col.iter().find(|z| z.norm() > 1e-9 * scale.max(1e-300)) {
            let ph = z.conj() / z.norm();
            let mut cm = v.column_mut(k);
            cm *= ph;
        }
    }
    let d = linalg::det(&v);
    let mut last = v.column_mut(n - 1);
    last *= d.conj() / d.norm();
    (vals, GroupElement { m: v })
}

/// Chamber coordinates `s_i = e_i - e_{i+1}` from decreasing eigenvalues.
pub fn chamber_coords(eigs: &[f64]) -> Vec<f64> {
    eigs.windows(2).map(|w| w[0] - w[1]).collect()
}

pub fn smallest_root_pairing(g: &GroupData, s: &[f64]) -> f64 {
    (0..g.num_positive_roots())
        .map(|k| g.pair_root(s, k))
        .fold(f64::INFINITY, f64::min)
}

pub fn require_regular(g: &GroupData, s: &[f64]) -> Result<(), GeometryError> {
    let m = smallest_root_pairing(g, s);
    if m > REGULARITY_THRESHOLD {
        Ok(())
    } else {
        Err(GeometryError::Singular(m))
    }
}

pub fn chamber_point_of(xi: &FullDualElement) -> ChamberPoint {
    let (e, _) = diagonalize(xi);
    ChamberPoint::new(chamber_coords(&e).iter().map(|v| v.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_is_orthonormal() {
        for n in [2, 3] {
            let b = hermitian_basis(n);
            assert_eq!(b.len(), n * n - 1);
            for (i, x) in b.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    let t = (x * y).trace();
                    assert!((t - c(f64::from(u8::from(i == j)), 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn su2_structure_constants() {
        // T_k = E_k / √2 satisfies [T_a, T_b] = ε_abc T_c
        let e: Vec<CMat> = (0..3)
            .map(|k| {
                let mut v = LieElement::zero(2);
                v.coords[k] = std::f64::consts::FRAC_1_SQRT_2;
                v.to_matrix()
            })
            .collect();
        let comm = linalg::commutator(&e[0], &e[1]);
        assert!(linalg::dist(&comm, &e[2]) < 1e-14);
    }

    #[test]
    fn trace_form_matches_weight_form() {
        let g = GroupData::new(crate::lie::GroupId::SU3).unwrap();
        let a = [0.3, 1.7];
        let b = [2.1, -0.4];
        let ha = FullDualElement::from_chamber(3, &a);
        let hb = FullDualElement::from_chamber(3, &b);
        assert!(((&ha.h * &hb.h).trace().re - g.pair(&a, &b)).abs() < 1e-14);
    }

    #[test]
    fn diagonalize_reconstructs_and_is_gauge_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3] {
            for _ in 0..50 {
                let xi = FullDualElement::random(n, 1.0, &mut rng);
                let (e, x2) = diagonalize(&xi);
                let d = FullDualElement::new(CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                    n,
                    e.iter().map(|&v| c(v, 0.0)),
                )));
                assert!(linalg::dist(&d.conjugate(&x2).h, &xi.h) < 1e-12);
                assert!((x2.det() - c(1.0, 0.0)).norm() < 1e-12);
                for k in 0..n - 1 {
                    let z = x2.m[(0, k)];
                    assert!(z.im.abs() < 1e-12 && z.re > 0.0);
                }
            }
        }
    }

    #[test]
    fn random_elements_are_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            let x = GroupElement::random(n, &mut rng);
            assert!(linalg::unitarity_defect(&x.m) < 1e-12);
            assert!((x.det() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn lie_coordinates_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = LieElement::random(3, 1.0, &mut rng);
        let y = LieElement::from_matrix(&x.to_matrix());
        for (a, b) in x.coords.iter().zip(&y.coords) {
            assert!((a - b).abs() < 1e-14);
        }
        let xi = FullDualElement::from_coords(3, &x.coords);
        assert!((xi.pair(&x) - x.norm().powi(2)).abs() < 1e-12);
    }
}
