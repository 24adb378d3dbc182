//! Weyl-invariant convex potentials on t*, their Legendre transforms,
//! Hessians, the Laplace phase and the Moser maps between Kähler structures.
//!
//! Potentials are functions of chamber coordinates `s` (weight coordinates of
//! a dominant representative). Built-in potentials are polynomials in the
//! Casimir `q = <s, s>`; custom potentials are arbitrary closures whose
//! derivatives are taken by central differences.

use crate::algebra::{
    self, chamber_coords, diag_from_weight_coords, diagonalize, require_regular, CartanElement,
    FullDualElement, GeometryError, GroupElement, LieElement,
};
use crate::lie::{ChamberPoint, GroupData, Weight};
use crate::linalg::{self, c, CMat};
use crate::phase::CotangentPoint;
use nalgebra::{DMatrix, DVector};
use std::fmt;
use std::sync::Arc;

pub type CustomFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    Strict,
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialTag {
    QuadraticCasimir,
    CasimirPolynomial,
    Custom,
}

/// Frame in which determinants of t*-Hessians are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetFrame {
    /// The invariant form itself.
    Metric,
    /// The rescaled form in which the weight lattice has covolume one.
    CovolumeOne,
}

#[derive(Clone)]
pub struct InvariantPotential {
    pub group: GroupData,
    /// `poly[k]` multiplies `q^k`.
    pub poly: Vec<f64>,
    pub customs: Vec<(f64, CustomFn)>,
    pub convexity: Convexity,
    pub tag: PotentialTag,
}

impl fmt::Debug for InvariantPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantPotential")
            .field("group", &self.group.id)
            .field("poly", &self.poly)
            .field("customs", &self.customs.len())
            .field("tag", &self.tag)
            .finish()
    }
}

const FD_STEP: f64 = 1e-5;

impl InvariantPotential {
    /// `½|ξ|²`
    pub fn quadratic(g: &GroupData) -> Self {
        InvariantPotential {
            group: g.clone(),
            poly: vec![0.0, 0.5],
            customs: vec![],
            convexity: Convexity::Uniform,
            tag: PotentialTag::QuadraticCasimir,
        }
    }

    /// `½|ξ|² + ¼|ξ|⁴`
    pub fn quartic_plus_quadratic(g: &GroupData) -> Self {
        Self::casimir_polynomial(g, &[0.0, 0.5, 0.25]).expect("valid coefficients")
    }

    /// `Σ_k c_k |ξ|^{2k}` with `c_1 > 0` and `c_k >= 0` for `k >= 2`.
    pub fn casimir_polynomial(g: &GroupData, coeffs: &[f64]) -> Result<Self, GeometryError> {
        if coeffs.len() < 2 || coeffs[1] <= 0.0 || coeffs[2..].iter().any(|&v| v < 0.0) {
            return Err(GeometryError::Unsupported(format!(
                "Casimir polynomial {coeffs:?} is not uniformly convex"
            )));
        }
        let tag = if coeffs[2..].iter().all(|&v| v == 0.0) && coeffs[1] == 0.5 {
            PotentialTag::QuadraticCasimir
        } else {
            PotentialTag::CasimirPolynomial
        };
        Ok(InvariantPotential {
            group: g.clone(),
            poly: coeffs.to_vec(),
            customs: vec![],
            convexity: Convexity::Uniform,
            tag,
        })
    }

    /// A user-supplied potential. Invariance and convexity are the caller's
    /// responsibility.
    pub fn custom(g: &GroupData, f: CustomFn, convexity: Convexity) -> Self {
        InvariantPotential {
            group: g.clone(),
            poly: vec![0.0],
            customs: vec![(1.0, f)],
            convexity,
            tag: PotentialTag::Custom,
        }
    }

    pub fn zero(g: &GroupData) -> Self {
        InvariantPotential {
            group: g.clone(),
            poly: vec![0.0],
            customs: vec![],
            convexity: Convexity::Strict,
            tag: PotentialTag::CasimirPolynomial,
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        let mut out = self.clone();
        out.poly.iter_mut().for_each(|v| *v *= t);
        out.customs.iter_mut().for_each(|(w, _)| *w *= t);
        if t != 1.0 && out.tag == PotentialTag::QuadraticCasimir {
            out.tag = PotentialTag::CasimirPolynomial;
        }
        out
    }

    /// `self + t·other`, the geodesic ray through `self` in direction `other`.
    pub fn plus(&self, t: f64, other: &InvariantPotential) -> Self {
        let o = other.scaled(t);
        let len = self.poly.len().max(o.poly.len());
        let poly = (0..len)
            .map(|k| self.poly.get(k).unwrap_or(&0.0) + o.poly.get(k).unwrap_or(&0.0))
            .collect();
        let mut customs = self.customs.clone();
        customs.extend(o.customs);
        let tag = if customs.is_empty() { PotentialTag::CasimirPolynomial } else { PotentialTag::Custom };
        let convexity = if self.convexity == Convexity::Uniform || other.convexity == Convexity::Uniform {
            Convexity::Uniform
        } else {
            Convexity::Strict
        };
        InvariantPotential { group: self.group.clone(), poly, customs, convexity, tag }
    }

    fn gram(&self) -> DMatrix<f64> {
        let r = self.group.rank;
        DMatrix::from_fn(r, r, |i, j| self.group.gram[i][j])
    }

    fn poly_derivs(&self, q: f64) -> (f64, f64, f64) {
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (k, &ck) in self.poly.iter().enumerate() {
            let k = k as i32;
            v += ck * q.powi(k);
            if k >= 1 {
                d1 += ck * k as f64 * q.powi(k - 1);
            }
            if k >= 2 {
                d2 += ck * (k * (k - 1)) as f64 * q.powi(k - 2);
            }
        }
        (v, d1, d2)
    }

    pub fn value(&self, s: &[f64]) -> f64 {
        let q = self.group.norm_sq(s);
        let mut v = self.poly_derivs(q).0;
        for (w, f) in &self.customs {
            v += w * f(s);
        }
        v
    }

    /// Coordinate gradient `∂h/∂s`.
    pub fn grad(&self, s: &[f64]) -> Vec<f64> {
        let g = self.gram();
        let sv = DVector::from_column_slice(s);
        let gs = &g * &sv;
        let (_, d1, _) = self.poly_derivs(self.group.norm_sq(s));
        let mut out: Vec<f64> = gs.iter().map(|v| 2.0 * d1 * v).collect();
        for (w, f) in &self.customs {
            for (i, o) in out.iter_mut().enumerate() {
                let h = FD_STEP * s[i].abs().max(1.0);
                let mut a = s.to_vec();
                let mut b = s.to_vec();
                a[i] += h;
                b[i] -= h;
                *o += w * (f(&a) - f(&b)) / (2.0 * h);
            }
        }
        out
    }

    /// Coordinate Hessian `∂²h/∂s²`.
    pub fn hess(&self, s: &[f64]) -> DMatrix<f64> {
        let r = s.len();
        let g = self.gram();
        let gs = &g * DVector::from_column_slice(s);
        let (_, d1, d2) = self.poly_derivs(self.group.norm_sq(s));
        let mut m = &gs * gs.transpose() * (4.0 * d2) + &g * (2.0 * d1);
        for (w, f) in &self.customs {
            for i in 0..r {
                for j in 0..r {
                    let hi = FD_STEP * s[i].abs().max(1.0);
                    let hj = FD_STEP * s[j].abs().max(1.0);
                    let at = |di: f64, dj: f64| {
                        let mut p = s.to_vec();
                        p[i] += di;
                        p[j] += dj;
                        f(&p)
                    };
                    let v = (at(hi, hj) - at(hi, -hj) - at(-hi, hj) + at(-hi, -hj)) / (4.0 * hi * hj);
                    m[(i, j)] += w * v;
                }
            }
        }
        m
    }

    /// Hessian as a symmetric matrix in an orthonormal frame of the
    /// invariant form, `G^{-1/2} ∂²h G^{-1/2}`.
    pub fn hess_metric(&self, s: &[f64]) -> DMatrix<f64> {
        let gi = linalg::sym_sqrt(&self.gram().try_inverse().expect("form is definite"));
        &gi * self.hess(s) * &gi
    }

    /// Determinant of the t*-Hessian as an endomorphism, in the given frame.
    pub fn hess_det(&self, s: &[f64], frame: DetFrame) -> f64 {
        let d = self.hess(s).determinant();
        match frame {
            DetFrame::Metric => d / self.gram().determinant(),
            // the rescaled form has unit determinant in weight coordinates
            DetFrame::CovolumeOne => d,
        }
    }

    pub fn is_uniformly_convex(&self) -> bool {
        self.convexity == Convexity::Uniform
    }
}

/// `L_h(ξ₊)`, the metric dual of `d_ξ h`, as a Cartan element.
pub fn legendre(h: &InvariantPotential, xi: &[f64]) -> CartanElement {
    let gi = h.gram().try_inverse().expect("form is definite");
    let y = gi * DVector::from_vec(h.grad(xi));
    CartanElement::new(y.iter().copied().collect())
}

/// Equivariant Legendre transform on all of k*.
pub fn legendre_full(h: &InvariantPotential, xi: &FullDualElement) -> Result<LieElement, GeometryError> {
    let n = xi.n();
    let (e, x2) = diagonalize(xi);
    let s = chamber_coords(&e);
    require_regular(&h.group, &s)?;
    let y = legendre(h, &s);
    let d = diag_from_weight_coords(n, &y.y);
    let dm = CMat::from_diagonal(&DVector::from_iterator(n, d.iter().map(|&v| c(0.0, -v))));
    Ok(LieElement::from_matrix(&(&x2.m * dm * x2.m.adjoint())))
}

/// Solves `legendre(h, s) = y` by damped Newton on `h(s) - <s, y>`.
pub fn legendre_inverse(h: &InvariantPotential, y: &CartanElement) -> Result<ChamberPoint, GeometryError> {
    legendre_inverse_from(h, y, &y.y)
}

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 100;

/// Warm-started variant of [`legendre_inverse`].
pub fn legendre_inverse_from(
    h: &InvariantPotential,
    y: &CartanElement,
    start: &[f64],
) -> Result<ChamberPoint, GeometryError> {
    let g = h.gram();
    let gy = &g * DVector::from_column_slice(&y.y);
    let phi = |s: &DVector<f64>| h.value(s.as_slice()) - s.dot(&gy);
    let scale = y.y.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut s = DVector::from_column_slice(start);
    for _ in 0..NEWTON_MAX_ITER {
        let grad = DVector::from_vec(h.grad(s.as_slice())) - &gy;
        let resid = g.clone().try_inverse().unwrap() * &grad;
        if resid.amax() <= NEWTON_TOL * scale {
            return Ok(ChamberPoint::new(s.iter().copied().collect()));
        }
        let hs = h.hess(s.as_slice());
        let step = hs.lu().solve(&grad).ok_or(GeometryError::NoConvergence(0))?;
        let f0 = phi(&s);
        let mut a = 1.0;
        let mut next = &s - &step * a;
        while phi(&next) > f0 + 1e-14 * f0.abs().max(1.0) && a > 1e-8 {
            a *= 0.5;
            next = &s - &step * a;
        }
        s = next;
    }
    Err(GeometryError::NoConvergence(NEWTON_MAX_ITER))
}

#[derive(Clone, Debug)]
pub struct HessianBlocks {
    /// t*-Hessian in an orthonormal frame of the invariant form.
    pub torus: DMatrix<f64>,
    /// `(α, <α, L_h(ξ₊)> / <α, ξ₊>)` for each positive root.
    pub roots: Vec<(Weight, f64)>,
}

pub fn hessian_full(h: &InvariantPotential, xi: &[f64]) -> Result<HessianBlocks, GeometryError> {
    require_regular(&h.group, xi)?;
    let l = legendre(h, xi);
    let g = &h.group;
    let roots = g
        .positive_roots
        .iter()
        .enumerate()
        .map(|(k, a)| (a.clone(), g.pair_root(&l.y, k) / g.pair_root(xi, k)))
        .collect();
    Ok(HessianBlocks { torus: h.hess_metric(xi), roots })
}

/// Full Hessian `d L_h` at `ξ`, as a real matrix on orthonormal coordinates
/// of k* → k.
pub fn hessian_full_matrix(h: &InvariantPotential, xi: &FullDualElement) -> Result<DMatrix<f64>, GeometryError> {
    let n = xi.n();
    let (e, x2) = diagonalize(xi);
    let s = chamber_coords(&e);
    require_regular(&h.group, &s)?;
    let basis = algebra::hermitian_basis(n);
    let dim = basis.len();
    let lam = diag_from_weight_coords(n, &legendre(h, &s).y);
    let mut block = DMatrix::zeros(dim, dim);
    // off-diagonal pairs come first in the basis, two per root
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (lam[i] - lam[j]) / (e[i] - e[j]);
            block[(k, k)] = v;
            block[(k + 1, k + 1)] = v;
            k += 2;
        }
    }
    // torus: s = J u for orthonormal diagonal coordinates u
    let r = n - 1;
    let jac = DMatrix::from_fn(r, r, |a, b| {
        let d = &basis[k + b];
        d[(a, a)].re - d[(a + 1, a + 1)].re
    });
    let t = jac.transpose() * h.hess(&s) * &jac;
    for a in 0..r {
        for b in 0..r {
            block[(k + a, k + b)] = t[(a, b)];
        }
    }
    let ad = ad_matrix(&x2);
    Ok(&ad * block * ad.transpose())
}

/// `Ad_x` on orthonormal coordinates; orthogonal.
pub fn ad_matrix(x: &GroupElement) -> DMatrix<f64> {
    let basis = algebra::hermitian_basis(x.n());
    let dim = basis.len();
    DMatrix::from_fn(dim, dim, |k, l| (&basis[k] * &x.m * &basis[l] * x.m.adjoint()).trace().re)
}

/// `ψ_h(ξ) = h(λ+ρ) - h(ξ) + <ξ - (λ+ρ), L_h(ξ)>`.
pub fn laplace_phase(h: &InvariantPotential, lambda: &Weight, xi: &[f64]) -> f64 {
    let m = lambda.add(&h.group.rho).as_f64();
    let grad = h.grad(xi);
    let lin: f64 = xi.iter().zip(&m).zip(&grad).map(|((a, b), d)| (a - b) * d).sum();
    h.value(&m) - h.value(xi) + lin
}

/// `ψ_t = L_g⁻¹ ∘ L_{g+th}` acting on `(x, ξ)` by moving `ξ` along its ray
/// of Legendre images.
pub fn moser_map(
    g: &InvariantPotential,
    h: &InvariantPotential,
    t: f64,
    p: &CotangentPoint,
) -> Result<CotangentPoint, GeometryError> {
    let n = p.xi.n();
    let (e, x2) = diagonalize(&p.xi);
    let s = chamber_coords(&e);
    require_regular(&g.group, &s)?;
    let gt = g.plus(t, h);
    let y = legendre(&gt, &s);
    let s_new = legendre_inverse_from(g, &y, &s)?;
    let xi_plus = FullDualElement::from_chamber(n, &s_new.coords);
    Ok(CotangentPoint { x: p.x.clone(), xi: xi_plus.conjugate(&x2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::GroupId;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> GroupData {
        GroupData::su2()
    }

    #[test]
    fn quadratic_legendre_is_identity() {
        let h = InvariantPotential::quadratic(&su2());
        assert!((legendre(&h, &[3.0]).y[0] - 3.0).abs() < 1e-14);
        let g3 = GroupData::new(GroupId::SU3).unwrap();
        let h3 = InvariantPotential::quadratic(&g3);
        let l = legendre(&h3, &[0.4, 1.3]);
        assert!((l.y[0] - 0.4).abs() < 1e-14 && (l.y[1] - 1.3).abs() < 1e-14);
    }

    #[test]
    fn quartic_legendre_radial_chain_rule() {
        let g = su2();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        // |ξ| = 1 means s = √2
        let s = 2f64.sqrt();
        assert!((legendre(&h, &[s]).y[0] - 2.0 * s).abs() < 1e-13);
    }

    #[test]
    fn legendre_matches_finite_differences() {
        let g = GroupData::new(GroupId::SU3).unwrap();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        let xi = [0.7, 0.2];
        let l = legendre(&h, &xi);
        for eta in [[1.0, 0.0], [0.3, -0.8]] {
            let eps = 1e-5;
            let a: Vec<f64> = xi.iter().zip(&eta).map(|(x, e)| x + eps * e).collect();
            let b: Vec<f64> = xi.iter().zip(&eta).map(|(x, e)| x - eps * e).collect();
            let fd = (h.value(&a) - h.value(&b)) / (2.0 * eps);
            assert!((fd - l.pair(&g, &eta)).abs() < 1e-6);
        }
    }

    #[test]
    fn inverse_solves_scalar_equation() {
        let g = su2();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        // |Y| = 2 with Y in weight coordinates: |y|² = y²/2
        let y = CartanElement::new(vec![2.0 * 2f64.sqrt()]);
        let s = legendre_inverse(&h, &y).unwrap();
        let norm = g.norm_sq(&s.coords).sqrt();
        // bisection on ρ(1 + ρ²) = 2
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * (1.0 + mid * mid) < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((norm - lo).abs() < 1e-10);
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hessian_blocks() {
        let g = su2();
        let q = InvariantPotential::quadratic(&g);
        let b = hessian_full(&q, &[1.7]).unwrap();
        assert!((b.torus[(0, 0)] - 1.0).abs() < 1e-14);
        assert!((b.roots[0].1 - 1.0).abs() < 1e-14);
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        let b = hessian_full(&h, &[2f64.sqrt()]).unwrap();
        assert!((b.roots[0].1 - 2.0).abs() < 1e-13);
        assert!(hessian_full(&h, &[0.0]).is_err());
    }

    #[test]
    fn full_hessian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3] {
            let g = GroupData::new(GroupId { n }).unwrap();
            let h = InvariantPotential::quartic_plus_quadratic(&g);
            for _ in 0..5 {
                let xi = FullDualElement::random(n, 1.0, &mut rng);
                let m = hessian_full_matrix(&h, &xi).unwrap();
                let u = xi.coords();
                let eps = 1e-5;
                for k in 0..u.len() {
                    let mut a = u.clone();
                    let mut b = u.clone();
                    a[k] += eps;
                    b[k] -= eps;
                    let la = legendre_full(&h, &FullDualElement::from_coords(n, &a)).unwrap();
                    let lb = legendre_full(&h, &FullDualElement::from_coords(n, &b)).unwrap();
                    for j in 0..u.len() {
                        let fd = (la.coords[j] - lb.coords[j]) / (2.0 * eps);
                        assert!((fd - m[(j, k)]).abs() < 1e-5, "n={n} ({j},{k}) fd={fd} an={}", m[(j, k)]);
                    }
                }
            }
        }
    }

    #[test]
    fn legendre_full_on_diagonal() {
        let g = su2();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        let xi = FullDualElement::from_chamber(2, &[1.3]);
        let l = legendre_full(&h, &xi).unwrap();
        let want = legendre(&h, &[1.3]).to_lie(2);
        for (a, b) in l.coords.iter().zip(&want.coords) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn laplace_phase_quadratic_is_square() {
        let g = su2();
        let h = InvariantPotential::quadratic(&g);
        let lam = Weight(vec![1]);
        for s in [0.3, 2.0, 3.7] {
            let want = 0.5 * g.norm_sq(&[s - 2.0]);
            assert!((laplace_phase(&h, &lam, &[s]) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn laplace_phase_hessian_at_minimum() {
        let g = su2();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        let lam = Weight(vec![2]);
        let m = 3.0;
        let e = 1e-3;
        let fd = (laplace_phase(&h, &lam, &[m + e]) - 2.0 * laplace_phase(&h, &lam, &[m])
            + laplace_phase(&h, &lam, &[m - e]))
            / (e * e);
        assert!(laplace_phase(&h, &lam, &[m]).abs() < 1e-13);
        assert!((fd - h.hess(&[m])[(0, 0)]).abs() < 1e-5);
    }

    #[test]
    fn moser_quadratic_is_rescaling() {
        let g = su2();
        let q = InvariantPotential::quadratic(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = CotangentPoint::random(2, &mut rng);
        let t = 0.8;
        let out = moser_map(&q, &q, t, &p).unwrap();
        assert!(linalg::dist(&out.xi.h, &p.xi.scale(1.0 + t).h) < 1e-10);
        assert!(linalg::dist(&out.x.m, &p.x.m) < 1e-15);
    }

    #[test]
    fn custom_potential_uses_finite_differences() {
        let g = su2();
        let f: CustomFn = Arc::new(|s: &[f64]| 0.25 * s[0] * s[0]);
        let h = InvariantPotential::custom(&g, f, Convexity::Uniform);
        assert!((legendre(&h, &[1.5]).y[0] - 1.5).abs() < 1e-8);
        assert!((h.hess(&[1.5])[(0, 0)] - 0.5).abs() < 1e-5);
        let y = CartanElement::new(vec![2.5]);
        assert!((legendre_inverse(&h, &y).unwrap().coords[0] - 2.5).abs() < 1e-8);
    }

    #[test]
    fn covolume_frame_determinant() {
        let g = su2();
        let q = InvariantPotential::quadratic(&g);
        assert!((q.hess_det(&[1.0], DetFrame::Metric) - 1.0).abs() < 1e-14);
        assert!((q.hess_det(&[1.0], DetFrame::CovolumeOne) - 0.5).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn legendre_round_trip(s in 0.05f64..8.0, quartic in any::<bool>()) {
            let g = su2();
            let h = if quartic { InvariantPotential::quartic_plus_quadratic(&g) } else { InvariantPotential::quadratic(&g) };
            let back = legendre_inverse(&h, &legendre(&h, &[s])).unwrap();
            prop_assert!((back.coords[0] - s).abs() < 1e-9);
        }

        #[test]
        fn legendre_round_trip_su3(a in 0.05f64..4.0, b in 0.05f64..4.0) {
            let g = GroupData::new(GroupId::SU3).unwrap();
            let h = InvariantPotential::quartic_plus_quadratic(&g);
            let back = legendre_inverse(&h, &legendre(&h, &[a, b])).unwrap();
            prop_assert!((back.coords[0] - a).abs() < 1e-9 && (back.coords[1] - b).abs() < 1e-9);
        }

        #[test]
        fn potentials_are_weyl_invariant(a in -4.0f64..4.0, b in -4.0f64..4.0) {
            let g = GroupData::new(GroupId::SU3).unwrap();
            let h = InvariantPotential::quartic_plus_quadratic(&g);
            let l = legendre(&h, &[a, b]);
            for w in &g.weyl {
                let wx = w.apply(&[a, b]);
                prop_assert!((h.value(&wx) - h.value(&[a, b])).abs() < 1e-9 * (1.0 + h.value(&[a, b])));
                let lw = legendre(&h, &wx);
                let wl = w.apply(&l.y);
                prop_assert!((lw.y[0] - wl[0]).abs() < 1e-8 && (lw.y[1] - wl[1]).abs() < 1e-8);
            }
        }

        #[test]
        fn legendre_full_is_equivariant(seed in any::<u64>()) {
            let g = su2();
            let h = InvariantPotential::quartic_plus_quadratic(&g);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xi = FullDualElement::random(2, 1.0, &mut rng);
            let u = GroupElement::random(2, &mut rng);
            let lhs = legendre_full(&h, &xi.conjugate(&u)).unwrap().to_matrix();
            let l = legendre_full(&h, &xi).unwrap().to_matrix();
            let rhs = &u.m * l * u.m.adjoint();
            prop_assert!(linalg::dist(&lhs, &rhs) < 1e-10);
        }
    }
}
