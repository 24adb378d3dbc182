//! Kähler data for an invariant potential `g`: the Kähler potential, the
//! holomorphic matrix coefficients, the holomorphic frame and its rescaled
//! top forms, half-form densities, and the half-form corrected states with
//! their norms.
//!
//! One-forms are written against the real frame `(ω^1..ω^n, dξ^1..dξ^n)`
//! built from the orthonormal basis of k, where `ω^k` are left-invariant.

use crate::algebra::{self, GeometryError, LieElement};
use crate::convex::{hessian_full_matrix, legendre, legendre_full, DetFrame, InvariantPotential};
use crate::lie::{GroupData, Weight};
use crate::linalg::{self, c, CMat, I};
use crate::phase::{mu_inv, weyl_constant, CotangentPoint};
use crate::quadrature::{self, RadialGrid};
use crate::repr::{haar_integrate, haar_quadrature, rep_complexified, rep_element, EndMatrix, Irrep};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::OnceLock;

/// `κ_g = <ξ, d_ξ g> - g(ξ)`; invariant, so it is evaluated on `μ_inv`.
pub fn kahler_potential(g: &InvariantPotential, p: &CotangentPoint) -> f64 {
    let s = mu_inv(p).coords;
    kahler_potential_chamber(g, &s)
}

pub fn kahler_potential_chamber(g: &InvariantPotential, s: &[f64]) -> f64 {
    let grad = g.grad(s);
    s.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>() - g.value(s)
}

/// `f^g_{λ,A}(x, ξ) = tr(π_λ(x e^{i L_g(ξ)}) A)`.
pub fn matrix_coeff(
    g: &InvariantPotential,
    ir: &Irrep,
    a: &EndMatrix,
    p: &CotangentPoint,
) -> Result<Complex64, GeometryError> {
    let y = legendre_full(g, &p.xi)?;
    Ok((rep_complexified(ir, &p.x, &y) * a).trace())
}

/// An n-form `e^{log_scale} R^1 ∧ ... ∧ R^n` given by `n` complex rows over
/// the real frame `(ω, dξ)`. The scale is kept apart from the rows so that
/// forms with exponentially large or small entries stay representable.
#[derive(Clone, Debug)]
pub struct TopFormValue {
    pub rows: CMat,
    pub log_scale: f64,
    /// Coefficient against `ω^1 ∧ ... ∧ ω^n`.
    pub coefficient: Complex64,
    /// `|det [[R], [R̄]]|^{1/2}` including the scale: the square root of the
    /// density of `Ω ∧ Ω̄` against the frame volume.
    pub half_density: f64,
    pub ln_half_density: f64,
}

impl TopFormValue {
    pub fn from_rows(rows: CMat) -> Self {
        Self::from_scaled_rows(rows, 0.0)
    }

    pub fn from_scaled_rows(rows: CMat, log_scale: f64) -> Self {
        let n = rows.nrows();
        let coefficient = linalg::det(&rows.columns(0, n).clone_owned()) * log_scale.exp();
        let mut full = CMat::zeros(2 * n, 2 * n);
        full.view_mut((0, 0), (n, 2 * n)).copy_from(&rows);
        full.view_mut((n, 0), (n, 2 * n)).copy_from(&rows.map(|z| z.conj()));
        let ln_half_density = log_scale + 0.5 * linalg::det(&full).norm().ln();
        TopFormValue { rows, log_scale, coefficient, half_density: ln_half_density.exp(), ln_half_density }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        self.scaled_log(k.norm().ln(), k / k.norm())
    }

    /// Multiplies by `e^{ln_k} · phase`, with `|phase| = 1`.
    pub fn scaled_log(&self, ln_k: f64, phase: Complex64) -> Self {
        let mut rows = self.rows.clone();
        let mut r0 = rows.row_mut(0);
        r0 *= phase;
        let ln_half_density = self.ln_half_density + ln_k;
        TopFormValue {
            rows,
            log_scale: self.log_scale + ln_k,
            coefficient: self.coefficient * phase * ln_k.exp(),
            half_density: ln_half_density.exp(),
            ln_half_density,
        }
    }

    /// Coefficients against all `n`-fold wedges of frame elements, in
    /// lexicographic order of the column subsets, without the scale.
    pub fn unscaled_plucker(&self) -> Vec<Complex64> {
        let n = self.rows.nrows();
        let m = self.rows.ncols();
        subsets(m, n)
            .iter()
            .map(|cols| {
                let sub = CMat::from_fn(n, n, |i, j| self.rows[(i, cols[j])]);
                linalg::det(&sub)
            })
            .collect()
    }

    pub fn plucker(&self) -> Vec<Complex64> {
        let k = self.log_scale.exp();
        self.unscaled_plucker().into_iter().map(|z| z * k).collect()
    }
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..m {
        for rest in subsets(m, k - 1) {
            if rest.first().map_or(true, |&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

/// Relative distance between two forms via their Plücker coordinates.
pub fn form_distance(a: &TopFormValue, b: &TopFormValue) -> f64 {
    let k = (a.log_scale - b.log_scale).exp();
    let pa = a.unscaled_plucker();
    let pb = b.unscaled_plucker();
    let num: f64 = pa.iter().zip(&pb).map(|(x, y)| (x * k - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = pb.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    num / den
}

/// `ad_Y` on orthonormal coordinates of k.
pub fn ad_matrix_lie(y: &LieElement) -> DMatrix<f64> {
    let n = y.n;
    let basis = algebra::hermitian_basis(n);
    let ym = y.to_matrix();
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (l, hl) in basis.iter().enumerate() {
        let el = hl * c(0.0, -1.0);
        let br = LieElement::from_matrix(&linalg::commutator(&ym, &el));
        for k in 0..dim {
            m[(k, l)] = br.coords[k];
        }
    }
    m
}

/// `i (1 - e^{-μ}) / μ`, the spectral function of `(1 - e^{-i ad}) / ad`
/// at eigenvalue `μ` of `i ad`.
fn phi1(mu: f64) -> Complex64 {
    let v = if mu.abs() < 1e-6 { 1.0 - mu / 2.0 + mu * mu / 6.0 } else { -(-mu).exp_m1() / mu };
    c(0.0, v)
}

/// The rows `Ω^j_g = (e^{-i ad_Y}, φ(i ad_Y) Hess)` of the holomorphic frame.
pub fn frame_rows(g: &InvariantPotential, p: &CotangentPoint) -> Result<CMat, GeometryError> {
    let y = legendre_full(g, &p.xi)?;
    let hess = hessian_full_matrix(g, &p.xi)?;
    let ad = ad_matrix_lie(&y);
    let h = ad.map(|v| c(0.0, v));
    let m1 = linalg::hermitian_fn(&h, |mu| c((-mu).exp(), 0.0));
    let m2 = linalg::hermitian_fn(&h, phi1) * hess.map(|v| c(v, 0.0));
    let dim = m1.nrows();
    let mut rows = CMat::zeros(dim, 2 * dim);
    rows.view_mut((0, 0), (dim, dim)).copy_from(&m1);
    rows.view_mut((0, dim), (dim, dim)).copy_from(&m2);
    Ok(rows)
}

/// The wedge `Ω_g` of the holomorphic frame.
///
/// In the eigenbasis of `i ad_Y` row `k` is `(e^{-μ_k} v_k^*, φ(μ_k) v_k^* Hess)`.
/// Each is divided by `max(1, e^{-μ_k})`, the factors go into the scale, and
/// the rows are rotated back by the unitary `V`, which only multiplies the
/// wedge by `det V`.
pub fn frame_form(g: &InvariantPotential, p: &CotangentPoint) -> Result<TopFormValue, GeometryError> {
    let y = legendre_full(g, &p.xi)?;
    let hess = hessian_full_matrix(g, &p.xi)?.map(|v| c(v, 0.0));
    let h = ad_matrix_lie(&y).map(|v| c(0.0, v));
    let (mu, v) = linalg::hermitian_eigen(&h);
    let vh = v.adjoint();
    let vhh = &vh * &hess;
    let dim = mu.len();
    let mut scaled = CMat::zeros(dim, 2 * dim);
    let mut log_scale = 0.0;
    for (k, &m) in mu.iter().enumerate() {
        let ls = (-m).max(0.0);
        log_scale += ls;
        let a = (-m - ls).exp();
        let b = if m.abs() < 1e-6 {
            phi1(m) * (-ls).exp()
        } else if m < 0.0 {
            c(0.0, m.exp_m1() / m)
        } else {
            c(0.0, -(-m).exp_m1() / m)
        };
        for j in 0..dim {
            scaled[(k, j)] = vh[(k, j)] * a;
            scaled[(k, dim + j)] = vhh[(k, j)] * b;
        }
    }
    let form = TopFormValue::from_scaled_rows(&v * scaled, log_scale);
    if !form.ln_half_density.is_finite() {
        return Err(GeometryError::Vanishing(form.half_density));
    }
    Ok(form)
}

/// `e^{-2<ρ, L_g∘μ_inv>} / (1 + det Hess_{t*} g)`.
pub fn omega_hat_prefactor(g: &InvariantPotential, s: &[f64], frame: DetFrame) -> f64 {
    ln_omega_hat_prefactor(g, s, frame).exp()
}

pub fn ln_omega_hat_prefactor(g: &InvariantPotential, s: &[f64], frame: DetFrame) -> f64 {
    let gd = &g.group;
    let l = legendre(g, s);
    let rho = gd.rho.as_f64();
    -2.0 * l.pair(gd, &rho) - (1.0 + g.hess_det(s, frame)).ln()
}

pub fn omega_hat(g: &InvariantPotential, p: &CotangentPoint, frame: DetFrame) -> Result<TopFormValue, GeometryError> {
    let s = mu_inv(p).coords;
    let f = frame_form(g, p)?;
    Ok(f.scaled_log(ln_omega_hat_prefactor(g, &s, frame), c(1.0, 0.0)))
}

/// `|<Ω̂_g, Ω̂_g>|^{1/2}`, the pointwise norm² of the half-form `Ω̂_g^{1/2}`.
pub fn half_density(g: &InvariantPotential, p: &CotangentPoint) -> Result<f64, GeometryError> {
    Ok(omega_hat(g, p, DetFrame::CovolumeOne)?.half_density)
}

/// The form `dξ^3 ∧ (P ω^{-α} - dξ^{-α}) ∧ dξ^α` on SU(2) at `(e, ξ₊)`, with
/// `ω^{-α} = ω^1 + iω^2`, `dξ^{-α} = -i(dξ^1 + i dξ^2)`, `dξ^α = dξ^1 - i dξ^2`.
pub fn omega_tilde_infinity_su2(s: f64) -> TopFormValue {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let p = c(s, 0.0);
    let rows = CMat::from_row_slice(
        3,
        6,
        &[
            z, z, z, z, z, o, //
            p, p * I, z, I, -o, z, //
            z, z, z, o, -I, z,
        ],
    );
    TopFormValue::from_rows(rows)
}

/// Scalar `k` with `lim_{t→∞} Ω̂_{g+th} = k · Ω̃_∞` on SU(2) at `(e, ξ₊)`.
///
/// The torus factor contributes `i` times the ratio of metric to
/// frame-determinant (the covolume scale `c` for the covolume-one frame),
/// the root factor `-1/(2P²)`.
pub fn omega_hat_limit_constant(g: &GroupData, s: f64, frame: DetFrame) -> Complex64 {
    let cf = match frame {
        DetFrame::Metric => 1.0,
        DetFrame::CovolumeOne => g.covolume_scale(),
    };
    let p = g.weyl_density(&[s]);
    c(0.0, -cf / (2.0 * p * p))
}

#[derive(Clone, Debug)]
pub enum StateTag {
    Schrodinger,
    Kahler(InvariantPotential),
    KirwinWu,
}

/// Which prefactor bookkeeping is used for a Kähler state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `e^{-g(λ+ρ)} f e^{-κ} e^{<ρ,L>} (1 + det Hess g)^{1/2}` against `Ω̂^{1/2}`.
    S,
    /// `e^{-g(λ+ρ)} f e^{-κ/2}` against `Ω_g^{1/2}`.
    Sigma,
}

#[derive(Clone, Debug)]
pub struct QuantumState {
    pub irrep: Irrep,
    pub a: EndMatrix,
    pub tag: StateTag,
    pub convention: Convention,
}

impl QuantumState {
    pub fn new(irrep: Irrep, a: EndMatrix, tag: StateTag) -> Result<Self, GeometryError> {
        if a.nrows() != irrep.dim || a.ncols() != irrep.dim {
            return Err(GeometryError::Unsupported(format!(
                "coefficient is {}×{}, representation has dimension {}",
                a.nrows(),
                a.ncols(),
                irrep.dim
            )));
        }
        Ok(QuantumState { irrep, a, tag, convention: Convention::S })
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        self.convention = c;
        self
    }

    pub fn lambda(&self) -> &Weight {
        &self.irrep.lambda
    }

    pub fn support_point(&self, g: &GroupData) -> Vec<f64> {
        self.irrep.lambda.add(&g.rho).as_f64()
    }
}

/// Coefficient in the unitary trivialization of the prequantum line, and
/// the pointwise norm² of the accompanying half-form.
pub fn state_eval(st: &QuantumState, p: &CotangentPoint) -> Result<(Complex64, f64), GeometryError> {
    match &st.tag {
        StateTag::Schrodinger => Ok(((rep_element(&st.irrep, &p.x) * &st.a).trace(), 1.0)),
        StateTag::KirwinWu => Err(GeometryError::Unsupported(
            "Kirwin-Wu states are distributions; use kw::kw_state_eval".into(),
        )),
        StateTag::Kahler(g) => {
            let gd = &g.group;
            let s = mu_inv(p).coords;
            let m = st.support_point(gd);
            let f = matrix_coeff(g, &st.irrep, &st.a, p)?;
            let kappa = kahler_potential_chamber(g, &s);
            match st.convention {
                Convention::S => {
                    let l = legendre(g, &s);
                    let rho = gd.rho.as_f64();
                    let pre = (-g.value(&m) - kappa + l.pair(gd, &rho)).exp()
                        * (1.0 + g.hess_det(&s, DetFrame::CovolumeOne)).sqrt();
                    Ok((f * pre, half_density(g, p)?))
                }
                Convention::Sigma => {
                    let pre = (-g.value(&m) - 0.5 * kappa).exp();
                    Ok((f * pre, frame_form(g, p)?.half_density))
                }
            }
        }
    }
}

/// Radial integrand of `‖s‖²` after integrating out `K × K`, without the
/// calibration and Weyl constants. Evaluated in log form.
fn radial_norm_density(g: &InvariantPotential, st: &QuantumState, s: f64) -> Result<f64, GeometryError> {
    let gd = &g.group;
    let m = st.support_point(gd);
    let sv = [s];
    let l = legendre(g, &sv);
    let kappa = kahler_potential_chamber(g, &sv);
    let p = CotangentPoint::on_chamber(2, &sv);
    let ln_hd = frame_form(g, &p)?.ln_half_density;
    let pw = gd.weyl_density(&sv);
    let kappa_weight = match st.convention {
        Convention::S => 2.0 * kappa,
        Convention::Sigma => kappa,
    };
    let terms: Vec<f64> = st
        .irrep
        .weights
        .iter()
        .map(|nu| (2.0 * l.pair(gd, &nu.as_f64()) - 2.0 * g.value(&m) - kappa_weight + ln_hd + 2.0 * pw.ln()).exp())
        .collect();
    Ok(quadrature::tree_sum(&terms))
}

/// Radial grid adapted to a state: covers the bulk of `e^{-t ψ}` around
/// the support point.
pub fn default_norm_grid(st: &QuantumState, width: f64) -> RadialGrid {
    let m = st.irrep.highest() as f64 + 1.0;
    let upper = m + 14.0 * width.max(0.5) + 4.0;
    RadialGrid::new(1e-9, upper, 96, 16)
}

/// Half-form pairing constant, fixed by requiring `‖s_{(1),E_11}‖² = 1/2`
/// at `t = 1` on the quadratic Casimir ray.
pub fn half_form_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let g = GroupData::su2();
        let ir = crate::repr::build_irrep(&g, &Weight(vec![1])).expect("SU(2) irrep");
        let st = QuantumState::new(ir, crate::repr::matrix_unit(2, 0, 0), StateTag::Kahler(InvariantPotential::quadratic(&g)))
            .expect("shapes match");
        let raw = raw_kahler_norm(&st, &default_norm_grid(&st, 1.0)).expect("reference norm");
        0.5 / raw
    })
}

fn raw_kahler_norm(st: &QuantumState, grid: &RadialGrid) -> Result<f64, GeometryError> {
    let StateTag::Kahler(g) = &st.tag else {
        return Err(GeometryError::Unsupported("not a Kähler state".into()));
    };
    let ck = weyl_constant(&g.group)?;
    let d = st.irrep.dim as f64;
    let tr = (st.a.adjoint() * &st.a).trace().re;
    let rule = grid.rule();
    let mut vals = Vec::with_capacity(rule.len());
    for &(s, w) in &rule {
        vals.push(w * radial_norm_density(g, st, s)?);
    }
    let last = radial_norm_density(g, st, grid.upper)?;
    let total = quadrature::tree_sum(&vals);
    let peak = vals.iter().zip(&rule).map(|(v, (_, w))| v / w).fold(0.0, f64::max);
    if last > 1e-13 * peak {
        return Err(GeometryError::NoConvergence(rule.len()));
    }
    Ok(ck * tr / (d * d) * total)
}

/// `‖st‖²`. Kähler norms are reduced to a radial integral by Schur
/// orthogonality over `K × K`; Schrödinger norms use Haar quadrature.
pub fn state_norm(st: &QuantumState, grid: Option<&RadialGrid>) -> Result<f64, GeometryError> {
    match &st.tag {
        StateTag::Schrodinger => {
            let g = GroupData::su2();
            let order = st.irrep.dim + 1;
            let rule = haar_quadrature(&g, order)?;
            let v = haar_integrate(&rule, |x| c((rep_element(&st.irrep, x) * &st.a).trace().norm_sqr(), 0.0));
            Ok(v.re)
        }
        StateTag::KirwinWu => Ok((st.a.adjoint() * &st.a).trace().re / st.irrep.dim as f64),
        StateTag::Kahler(g) => {
            let width = 1.0 / g.hess(&[st.irrep.highest() as f64 + 1.0])[(0, 0)].max(1e-12).sqrt();
            let own;
            let grid = match grid {
                Some(gr) => gr,
                None => {
                    own = default_norm_grid(st, width);
                    &own
                }
            };
            Ok(half_form_constant() * raw_kahler_norm(st, grid)?)
        }
    }
}

/// Pointwise `|s|²` times the half-form density, with the calibration constant.
pub fn pointwise_density(st: &QuantumState, p: &CotangentPoint) -> Result<f64, GeometryError> {
    let (v, hd) = state_eval(st, p)?;
    Ok(half_form_constant() * v.norm_sqr() * hd)
}
