//! Points of T*K ≅ K × k*, the symplectic form, moment maps, the KAK
//! decomposition, the singular torus action, invariant flows and integration.

use crate::algebra::{
    chamber_coords, diagonalize, require_regular, FullDualElement, GeometryError, GroupElement, LieElement,
};
use crate::convex::{legendre_full, InvariantPotential};
use crate::lie::{ChamberPoint, GroupData};
use crate::linalg::{self, commutator};
use crate::quadrature::{self, RadialGrid};
use crate::repr::haar_quadrature;
use rand::Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint {
    pub x: GroupElement,
    pub xi: FullDualElement,
}

impl CotangentPoint {
    pub fn new(x: GroupElement, xi: FullDualElement) -> Self {
        CotangentPoint { x, xi }
    }

    /// `(e, ξ₊)` on the symplectic cross-section.
    pub fn on_chamber(n: usize, s: &[f64]) -> Self {
        CotangentPoint { x: GroupElement::identity(n), xi: FullDualElement::from_chamber(n, s) }
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        CotangentPoint { x: GroupElement::random(n, rng), xi: FullDualElement::random(n, 1.0, rng) }
    }

    /// Random point with `μ_inv` sampled from `[lo, hi]` in each coordinate.
    pub fn random_with_chamber(n: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Self {
        let s: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(lo..hi)).collect();
        let u = GroupElement::random(n, rng);
        CotangentPoint { x: GroupElement::random(n, rng), xi: FullDualElement::from_chamber(n, &s).conjugate(&u) }
    }
}

/// `(x, ξ) = (x₁ x₂⁻¹, Ad*_{x₂} ξ₊)` with `x₂` in the declared gauge.
#[derive(Clone, Debug)]
pub struct KAKFrame {
    pub x1: GroupElement,
    pub x2: GroupElement,
    pub xi_plus: ChamberPoint,
}

pub fn kak_decompose(g: &GroupData, p: &CotangentPoint) -> Result<KAKFrame, GeometryError> {
    let (e, x2) = diagonalize(&p.xi);
    let s = chamber_coords(&e);
    require_regular(g, &s)?;
    Ok(KAKFrame { x1: p.x.mul(&x2), x2, xi_plus: ChamberPoint::new(s) })
}

impl KAKFrame {
    /// The same point with a different torus gauge, `(x₁τ, x₂τ)`.
    pub fn regauge(&self, tau: &GroupElement) -> KAKFrame {
        KAKFrame { x1: self.x1.mul(tau), x2: self.x2.mul(tau), xi_plus: self.xi_plus.clone() }
    }

    pub fn point(&self) -> CotangentPoint {
        let n = self.x1.n();
        CotangentPoint {
            x: self.x1.mul(&self.x2.inverse()),
            xi: FullDualElement::from_chamber(n, &self.xi_plus.coords).conjugate(&self.x2),
        }
    }
}

/// Dominant representative of the coadjoint orbit of `ξ`.
pub fn mu_inv(p: &CotangentPoint) -> ChamberPoint {
    crate::algebra::chamber_point_of(&p.xi)
}

/// `(μ_L, μ_R) = (Ad*_x ξ, -ξ)`.
pub fn moment_maps(p: &CotangentPoint) -> (FullDualElement, FullDualElement) {
    (p.xi.conjugate(&p.x), p.xi.scale(-1.0))
}

/// `(k₁, k₂)·(x, ξ) = (k₁ x k₂⁻¹, Ad*_{k₂} ξ)`.
pub fn kxk_act(k1: &GroupElement, k2: &GroupElement, p: &CotangentPoint) -> CotangentPoint {
    CotangentPoint { x: k1.mul(&p.x).mul(&k2.inverse()), xi: p.xi.conjugate(k2) }
}

/// `(x, ξ) ⋆ t = (x x₂ t⁻¹ x₂⁻¹, ξ)`.
pub fn tinv_act(g: &GroupData, p: &CotangentPoint, t: &GroupElement) -> Result<CotangentPoint, GeometryError> {
    let f = kak_decompose(g, p)?;
    let x = p.x.mul(&f.x2).mul(&t.inverse()).mul(&f.x2.inverse());
    Ok(CotangentPoint { x, xi: p.xi.clone() })
}

/// Hamiltonian flow of `h ∘ μ_inv`: `(x e^{t L_h(ξ)}, ξ)`.
pub fn invariant_flow(h: &InvariantPotential, p: &CotangentPoint, t: f64) -> Result<CotangentPoint, GeometryError> {
    let l = legendre_full(h, &p.xi)?;
    Ok(CotangentPoint { x: p.x.mul(&GroupElement::exp(&l.scale(t))), xi: p.xi.clone() })
}

/// A tangent vector in left trivialization: `ẋ = x·X`.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub x_dot: LieElement,
    pub xi_dot: FullDualElement,
}

/// `ω(v₁, v₂) = <ξ̇₂, X₁> - <ξ̇₁, X₂> + <ξ, [X₁, X₂]>`.
pub fn symplectic_form(p: &CotangentPoint, v1: &TangentVector, v2: &TangentVector) -> f64 {
    let br = LieElement::from_matrix(&commutator(&v1.x_dot.to_matrix(), &v2.x_dot.to_matrix()));
    v2.xi_dot.pair(&v1.x_dot) - v1.xi_dot.pair(&v2.x_dot) + p.xi.pair(&br)
}

/// Quadrature specification for integrals over T*SU(2).
#[derive(Clone, Debug)]
pub struct LiouvilleSpec {
    pub k_order: usize,
    pub radial: RadialGrid,
    /// Gauss–Legendre nodes in the polar angle of k* ≅ ℝ³; the azimuth uses
    /// twice as many uniform nodes.
    pub angular: usize,
}

impl Default for LiouvilleSpec {
    fn default() -> Self {
        LiouvilleSpec { k_order: 3, radial: RadialGrid::new(0.0, 8.0, 16, 12), angular: 6 }
    }
}

/// Nodes and weights for Lebesgue measure on k* ≅ ℝ³ (SU(2)), using the
/// orthonormal coordinates of [`FullDualElement::coords`].
pub fn dual_space_rule(radial: &RadialGrid, angular: usize) -> Vec<(FullDualElement, f64)> {
    let rs = radial.rule();
    let cos_nodes = quadrature::gauss_legendre_on(angular, -1.0, 1.0);
    let phis = quadrature::periodic(2 * angular, 2.0 * PI);
    let mut out = Vec::with_capacity(rs.len() * cos_nodes.len() * phis.len());
    for &(r, wr) in &rs {
        for &(ct, wc) in &cos_nodes {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for &(ph, wp) in &phis {
                let u = [r * st * ph.cos(), r * st * ph.sin(), r * ct];
                out.push((FullDualElement::from_coords(2, &u), wr * r * r * wc * wp));
            }
        }
    }
    out
}

/// `∫_K ∫_{k*} f(x, ξ) dx dξ` with normalized Haar measure and Lebesgue
/// measure in orthonormal coordinates.
pub fn liouville_integrate(
    g: &GroupData,
    f: impl Fn(&CotangentPoint) -> f64 + Sync,
    spec: &LiouvilleSpec,
) -> Result<f64, GeometryError> {
    use rayon::prelude::*;
    let k_rule = haar_quadrature(g, spec.k_order)?;
    let xi_rule = dual_space_rule(&spec.radial, spec.angular);
    let terms: Vec<f64> = k_rule
        .par_iter()
        .map(|(x, wx)| {
            let inner: Vec<f64> = xi_rule
                .iter()
                .map(|(xi, wxi)| wxi * f(&CotangentPoint { x: x.clone(), xi: xi.clone() }))
                .collect();
            wx * quadrature::tree_sum(&inner)
        })
        .collect();
    Ok(quadrature::tree_sum(&terms))
}

/// Constant `c_K` in `∫_{k*} φ(μ_inv) dξ = c_K ∫_{chamber} P² φ ds`,
/// obtained by comparing a Gaussian integrated both ways.
pub fn weyl_constant(g: &GroupData) -> Result<f64, GeometryError> {
    if g.rank != 1 {
        return Err(GeometryError::Unsupported(format!("Weyl constant for {}", g.id)));
    }
    static CK: OnceLock<f64> = OnceLock::new();
    Ok(*CK.get_or_init(|| {
        let grid = RadialGrid::new(0.0, 10.0, 40, 16);
        let full: f64 = quadrature::tree_sum(
            &dual_space_rule(&grid, 4)
                .iter()
                .map(|(xi, w)| w * (-xi.norm_sq()).exp())
                .collect::<Vec<_>>(),
        );
        let sgrid = RadialGrid::new(0.0, 10.0 * 2f64.sqrt(), 40, 16);
        let reduced = sgrid.integrate(|s| {
            let p = g.weyl_density(&[s]);
            p * p * (-g.norm_sq(&[s])).exp()
        });
        full / reduced
    }))
}

/// `c_K ∫_{chamber} P(s)² φ(s) ds`.
pub fn weyl_integrate_invariant(
    g: &GroupData,
    phi: impl Fn(f64) -> f64,
    grid: &RadialGrid,
) -> Result<f64, GeometryError> {
    let ck = weyl_constant(g)?;
    Ok(ck * grid.integrate(|s| {
        let p = g.weyl_density(&[s]);
        p * p * phi(s)
    }))
}

/// Pulls a function of `μ_inv` back to T*K.
pub fn invariant_extension(phi: impl Fn(f64) -> f64) -> impl Fn(&CotangentPoint) -> f64 {
    move |p: &CotangentPoint| phi(mu_inv(p).coords[0])
}

pub fn dist_points(a: &CotangentPoint, b: &CotangentPoint) -> f64 {
    linalg::dist(&a.x.m, &b.x.m) + linalg::dist(&a.xi.h, &b.xi.h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::InvariantPotential;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2() -> GroupData {
        GroupData::su2()
    }

    #[test]
    fn kak_on_cross_section_is_trivial() {
        let g = su2();
        let p = CotangentPoint::on_chamber(2, &[1.4]);
        let f = kak_decompose(&g, &p).unwrap();
        assert!(linalg::dist(&f.x1.m, &linalg::identity(2)) < 1e-15);
        assert!(linalg::dist(&f.x2.m, &linalg::identity(2)) < 1e-15);
        assert!((f.xi_plus.coords[0] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn kak_reconstructs_random_points() {
        let g = su2();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let p = CotangentPoint::random(2, &mut rng);
            let f = kak_decompose(&g, &p).unwrap();
            assert!(dist_points(&f.point(), &p) < 1e-10);
        }
    }

    #[test]
    fn kak_refuses_singular_points() {
        let g = su2();
        let p = CotangentPoint::on_chamber(2, &[0.0]);
        assert!(matches!(kak_decompose(&g, &p), Err(GeometryError::Singular(_))));
        assert!(mu_inv(&p).coords[0].abs() < 1e-15);
        assert!(!mu_inv(&p).regular);
    }

    #[test]
    fn moment_maps_at_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xi = FullDualElement::random(2, 1.0, &mut rng);
        let p = CotangentPoint::new(GroupElement::identity(2), xi.clone());
        let (l, r) = moment_maps(&p);
        assert!(linalg::dist(&l.h, &xi.h) < 1e-15);
        assert!(linalg::dist(&r.h, &xi.scale(-1.0).h) < 1e-15);
    }

    #[test]
    fn torus_action_on_cross_section_is_left_translation() {
        let g = su2();
        let x = GroupElement::torus(&[0.3]);
        let p = CotangentPoint::new(x.clone(), FullDualElement::from_chamber(2, &[2.0]));
        let t = GroupElement::torus(&[1.1]);
        let q = tinv_act(&g, &p, &t).unwrap();
        assert!(linalg::dist(&q.x.m, &t.inverse().mul(&x).m) < 1e-14);
    }

    #[test]
    fn symplectic_form_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = CotangentPoint::random(2, &mut rng);
        let v = TangentVector { x_dot: LieElement::random(2, 1.0, &mut rng), xi_dot: FullDualElement::random(2, 1.0, &mut rng) };
        assert!(symplectic_form(&p, &v, &v).abs() < 1e-14);
        let a = TangentVector { x_dot: LieElement::zero(2), xi_dot: FullDualElement::random(2, 1.0, &mut rng) };
        let b = TangentVector { x_dot: LieElement::zero(2), xi_dot: FullDualElement::random(2, 1.0, &mut rng) };
        assert!(symplectic_form(&p, &a, &b).abs() < 1e-14);
    }

    #[test]
    fn hamilton_equation() {
        let g = su2();
        let h = InvariantPotential::quartic_plus_quadratic(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let p = CotangentPoint::random(2, &mut rng);
            let v = TangentVector { x_dot: LieElement::random(2, 1.0, &mut rng), xi_dot: FullDualElement::random(2, 1.0, &mut rng) };
            let xh = TangentVector { x_dot: legendre_full(&h, &p.xi).unwrap(), xi_dot: FullDualElement::from_coords(2, &[0.0; 3]) };
            let eps = 1e-5;
            let hv = |e: f64| h.value(&mu_inv(&CotangentPoint::new(p.x.clone(), p.xi.add(&v.xi_dot.scale(e)))).coords);
            let dh = (hv(eps) - hv(-eps)) / (2.0 * eps);
            assert!((dh - symplectic_form(&p, &xh, &v)).abs() < 1e-6);
        }
    }

    #[test]
    fn weyl_constant_is_sqrt2_pi() {
        let ck = weyl_constant(&su2()).unwrap();
        assert!((ck - 2f64.sqrt() * PI).abs() < 1e-10);
    }

    #[test]
    fn gaussian_both_ways() {
        let g = su2();
        let spec = LiouvilleSpec { k_order: 1, radial: RadialGrid::new(0.0, 8.0, 16, 12), angular: 4 };
        let full = liouville_integrate(&g, |p| (-p.xi.norm_sq()).exp(), &spec).unwrap();
        assert!((full - PI.powf(1.5)).abs() < 1e-8);
        let grid = RadialGrid::new(0.0, 12.0, 24, 12);
        let red = weyl_integrate_invariant(&g, |s| (-g.norm_sq(&[s])).exp(), &grid).unwrap();
        assert!((red - full).abs() < 1e-8);
        // second moment
        let full2 = liouville_integrate(&g, |p| p.xi.norm_sq() * (-p.xi.norm_sq()).exp(), &spec).unwrap();
        let red2 = weyl_integrate_invariant(&g, |s| g.norm_sq(&[s]) * (-g.norm_sq(&[s])).exp(), &grid).unwrap();
        assert!((full2 - 1.5 * PI.powf(1.5)).abs() < 1e-8);
        assert!((full2 - red2).abs() < 1e-8);
    }

    #[test]
    fn schur_factor_kills_integral() {
        let g = su2();
        let ir = crate::repr::build_irrep(&g, &crate::lie::Weight(vec![1])).unwrap();
        let spec = LiouvilleSpec { k_order: 2, radial: RadialGrid::new(0.0, 8.0, 8, 8), angular: 2 };
        let v = liouville_integrate(&g, |p| crate::repr::character(&ir, &p.x).re * (-p.xi.norm_sq()).exp(), &spec).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn ball_volume() {
        let g = su2();
        let spec = LiouvilleSpec { k_order: 1, radial: RadialGrid::new(0.0, 2.0, 2, 8), angular: 2 };
        let v = liouville_integrate(&g, |p| if p.xi.norm_sq() <= 4.0 { 1.0 } else { 0.0 }, &spec).unwrap();
        assert!((v - 4.0 / 3.0 * PI * 8.0).abs() < 1e-10);
        // indicator of the chamber box [0, 2] in s-coordinates
        let ck = weyl_constant(&g).unwrap();
        let b = weyl_integrate_invariant(&g, |s| if s <= 2.0 { 1.0 } else { 0.0 }, &RadialGrid::new(0.0, 2.0, 1, 4)).unwrap();
        assert!((b - ck * 8.0 / 3.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn mu_inv_is_kxk_invariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = CotangentPoint::random(2, &mut rng);
            let k1 = GroupElement::random(2, &mut rng);
            let k2 = GroupElement::random(2, &mut rng);
            let q = kxk_act(&k1, &k2, &p);
            prop_assert!((mu_inv(&p).coords[0] - mu_inv(&q).coords[0]).abs() < 1e-10);
            let (l, r) = moment_maps(&p);
            let (lq, rq) = moment_maps(&q);
            prop_assert!(linalg::dist(&lq.h, &l.conjugate(&k1).h) < 1e-10);
            prop_assert!(linalg::dist(&rq.h, &r.conjugate(&k2).h) < 1e-10);
        }

        #[test]
        fn kak_reconstruction_su3(seed in any::<u64>()) {
            let g = GroupData::new(crate::lie::GroupId::SU3).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = CotangentPoint::random(3, &mut rng);
            let f = kak_decompose(&g, &p).unwrap();
            prop_assert!(dist_points(&f.point(), &p) < 1e-10);
        }

        #[test]
        fn torus_action_properties(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let g = su2();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = CotangentPoint::random(2, &mut rng);
            let (s, t) = (GroupElement::torus(&[a]), GroupElement::torus(&[b]));
            let lhs = tinv_act(&g, &tinv_act(&g, &p, &s).unwrap(), &t).unwrap();
            let rhs = tinv_act(&g, &p, &s.mul(&t)).unwrap();
            prop_assert!(dist_points(&lhs, &rhs) < 1e-10);
            prop_assert!((mu_inv(&lhs).coords[0] - mu_inv(&p).coords[0]).abs() < 1e-12);
            let k1 = GroupElement::random(2, &mut rng);
            let k2 = GroupElement::random(2, &mut rng);
            let one = kxk_act(&k1, &k2, &tinv_act(&g, &p, &t).unwrap());
            let two = tinv_act(&g, &kxk_act(&k1, &k2, &p), &t).unwrap();
            prop_assert!(dist_points(&one, &two) < 1e-10);
        }

        #[test]
        fn invariant_flow_is_a_flow(seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let g = su2();
            let h = InvariantPotential::quartic_plus_quadratic(&g);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = CotangentPoint::random(2, &mut rng);
            let a = invariant_flow(&h, &invariant_flow(&h, &p, s).unwrap(), t).unwrap();
            let b = invariant_flow(&h, &p, s + t).unwrap();
            prop_assert!(dist_points(&a, &b) < 1e-10);
            prop_assert!((mu_inv(&a).coords[0] - mu_inv(&p).coords[0]).abs() < 1e-12);
            let sp = |q: &CotangentPoint| linalg::hermitian_eigen(&moment_maps(q).0.h).0;
            let (ea, ep) = (sp(&a), sp(&p));
            prop_assert!((ea[0] - ep[0]).abs() < 1e-10);
        }
    }
}
