//! The large-time limit along `g + t h`: the functions `F_{λ,A}`, Fourier
//! harmonics of matrix coefficients under the singular torus action,
//! convergence diagnostics, Laplace concentration, Bohr-Sommerfeld
//! monodromy and the limiting distributional states.

use crate::algebra::{GeometryError, GroupElement};
use crate::convex::{laplace_phase, legendre, DetFrame, InvariantPotential};
use crate::lie::{ChamberPoint, GroupData, Weight, REGULARITY_THRESHOLD};
use crate::linalg::{c, CMat};
use crate::phase::{kak_decompose, CotangentPoint, KAKFrame};
use crate::quadrature;
use crate::repr::{haar_quadrature, rep_element, weight_projector, EndMatrix, Irrep};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// `χ_ν(t)` for `t = diag(e^{iθ_1}, ..., e^{iθ_n})`.
pub fn torus_character(nu: &Weight, t: &GroupElement) -> Complex64 {
    let mut partial = 0.0;
    let mut phase = 0.0;
    for (i, &v) in nu.0.iter().enumerate() {
        partial += t.m[(i, i)].arg();
        phase += v as f64 * partial;
    }
    Complex64::from_polar(1.0, phase)
}

/// `F_{λ,A}(x, ξ) = tr(π_λ(x₁) P_λ π_λ(x₂⁻¹) A)` in the declared KAK gauge.
pub fn big_f(g: &GroupData, ir: &Irrep, a: &EndMatrix, p: &CotangentPoint) -> Result<Complex64, GeometryError> {
    let f = kak_decompose(g, p)?;
    Ok(big_f_frame(ir, a, &f))
}

pub fn big_f_frame(ir: &Irrep, a: &EndMatrix, f: &KAKFrame) -> Complex64 {
    big_f_group(ir, a, &f.x1, &f.x2)
}

/// `tr(π_λ(k₁) P_λ π_λ(k₂⁻¹) A)`.
pub fn big_f_group(ir: &Irrep, a: &EndMatrix, k1: &GroupElement, k2: &GroupElement) -> Complex64 {
    let p1 = rep_element(ir, k1);
    let p2 = rep_element(ir, k2).adjoint();
    // P_λ is the first basis vector
    (0..ir.dim).map(|b| p1[(b, 0)] * (p2.row(0) * a.column(b))[(0, 0)]).sum()
}

/// `π_λ(x₂) P_ν π_λ(x₂⁻¹)`.
pub fn conj_projector(ir: &Irrep, nu: &Weight, frame: &KAKFrame) -> EndMatrix {
    let u = rep_element(ir, &frame.x2);
    &u * weight_projector(ir, nu) * u.adjoint()
}

/// Harmonics of `f^g_{λ,A}` at one point, split as `e^{<ν, L_g(ξ₊)>} c_ν`.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    pub lambda: Weight,
    pub weights: Vec<Weight>,
    /// `<ν, L_g(ξ₊)>`.
    pub exponents: Vec<f64>,
    /// `tr(π_λ(x₁) P_ν π_λ(x₂⁻¹) A)`.
    pub coefficients: Vec<Complex64>,
}

impl HarmonicTable {
    pub fn entry(&self, nu: &Weight) -> Complex64 {
        match self.weights.iter().position(|w| w == nu) {
            Some(k) => self.coefficients[k] * self.exponents[k].exp(),
            None => c(0.0, 0.0),
        }
    }

    pub fn entries(&self) -> Vec<(Weight, Complex64)> {
        self.weights.iter().map(|w| (w.clone(), self.entry(w))).collect()
    }

    pub fn highest_index(&self) -> usize {
        self.weights.iter().position(|w| *w == self.lambda).expect("highest weight present")
    }

    pub fn sum(&self) -> Complex64 {
        let terms: Vec<Complex64> = self.weights.iter().map(|w| self.entry(w)).collect();
        quadrature::tree_sum_complex(&terms)
    }

    /// `e^{-<λ, L>} Σ_ν (f̂)_ν`, evaluated without forming the large factors.
    pub fn rescaled(&self) -> Complex64 {
        let top = self.exponents[self.highest_index()];
        let terms: Vec<Complex64> =
            self.coefficients.iter().zip(&self.exponents).map(|(cf, e)| cf * (e - top).exp()).collect();
        quadrature::tree_sum_complex(&terms)
    }

    /// `ln |Σ_ν (f̂)_ν|`, stable when the exponents are large.
    pub fn ln_abs_sum(&self) -> f64 {
        self.exponents[self.highest_index()] + self.rescaled().norm().ln()
    }
}

pub fn harmonics(
    g: &InvariantPotential,
    ir: &Irrep,
    a: &EndMatrix,
    p: &CotangentPoint,
) -> Result<HarmonicTable, GeometryError> {
    let gd = &g.group;
    let f = kak_decompose(gd, p)?;
    let l = legendre(g, &f.xi_plus.coords);
    let p1 = rep_element(ir, &f.x1);
    let right = rep_element(ir, &f.x2).adjoint() * a;
    let coefficients = (0..ir.dim).map(|k| (p1.column(k).transpose() * right.row(k).transpose())[(0, 0)]).collect();
    let exponents = ir.weights.iter().map(|nu| l.pair(gd, &nu.as_f64())).collect();
    Ok(HarmonicTable { lambda: ir.lambda.clone(), weights: ir.weights.clone(), exponents, coefficients })
}

/// `∫_T χ_ν(t) f(p ⋆ t) dt` for each `ν`, by a periodic rule with `nodes`
/// points; `f` is evaluated once per node.
pub fn harmonics_by_torus_integration(
    g: &InvariantPotential,
    f: impl Fn(&CotangentPoint) -> Result<Complex64, GeometryError>,
    nus: &[Weight],
    p: &CotangentPoint,
    nodes: usize,
) -> Result<Vec<Complex64>, GeometryError> {
    let gd = &g.group;
    if gd.rank != 1 {
        return Err(GeometryError::Unsupported("torus integration beyond rank one".into()));
    }
    let mut terms = vec![Vec::with_capacity(nodes); nus.len()];
    for (th, w) in quadrature::periodic(nodes, 2.0 * PI) {
        let t = GroupElement::torus(&[th]);
        let v = f(&crate::phase::tinv_act(gd, p, &t)?)? * (w / (2.0 * PI));
        for (k, nu) in nus.iter().enumerate() {
            terms[k].push(torus_character(nu, &t) * v);
        }
    }
    Ok(terms.iter().map(|ts| quadrature::tree_sum_complex(ts)).collect())
}

/// `<λ - ν, L_h(ξ₊)>` for every weight `ν ≠ λ` of the representation.
pub fn spectral_gaps(h: &InvariantPotential, ir: &Irrep, xi_plus: &[f64]) -> Vec<(Weight, f64)> {
    let gd = &h.group;
    let l = legendre(h, xi_plus);
    ir.weights
        .iter()
        .filter(|nu| **nu != ir.lambda)
        .map(|nu| (nu.clone(), l.pair(gd, &ir.lambda.sub(nu).as_f64())))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub t: f64,
    pub rescaled: Complex64,
    /// `|Σ_{ν≠λ} e^{<ν-λ, L_t>} c_ν|`.
    pub error: f64,
    /// `|rescaled − F|` with both sides formed separately; bottoms out at
    /// rounding level.
    pub naive_error: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceProfile {
    pub big_f: Complex64,
    pub rows: Vec<ConvergenceRow>,
    pub fitted_rate: Option<f64>,
    pub r_squared: Option<f64>,
    /// `min_{ν≠λ, c_ν≠0} <λ-ν, L_h(ξ₊)>`; `None` when only `ν = λ` is present.
    pub predicted_rate: Option<f64>,
}

/// Least-squares line through `(x, y)`: `(slope, intercept, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some((slope, icpt, r2))
}

pub fn convergence_profile(
    g: &InvariantPotential,
    h: &InvariantPotential,
    ir: &Irrep,
    a: &EndMatrix,
    p: &CotangentPoint,
    ts: &[f64],
) -> Result<ConvergenceProfile, GeometryError> {
    let gd = &g.group;
    let big = big_f(gd, ir, a, p)?;
    let rows: Vec<ConvergenceRow> = ts
        .par_iter()
        .map(|&t| {
            let tab = harmonics(&g.plus(t, h), ir, a, p)?;
            let top = tab.exponents[tab.highest_index()];
            let rest: Vec<Complex64> = (0..tab.weights.len())
                .filter(|&k| k != tab.highest_index())
                .map(|k| tab.coefficients[k] * (tab.exponents[k] - top).exp())
                .collect();
            let rescaled = tab.rescaled();
            Ok(ConvergenceRow {
                t,
                rescaled,
                error: quadrature::tree_sum_complex(&rest).norm(),
                naive_error: (rescaled - big).norm(),
            })
        })
        .collect::<Result<_, GeometryError>>()?;

    let f = kak_decompose(gd, p)?;
    let tab = harmonics(g, ir, a, p)?;
    let scale = tab.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lh = legendre(h, &f.xi_plus.coords);
    let predicted_rate = tab
        .weights
        .iter()
        .zip(&tab.coefficients)
        .filter(|(nu, cf)| **nu != ir.lambda && cf.norm() > 1e-12 * scale)
        .map(|(nu, _)| lh.pair(gd, &ir.lambda.sub(nu).as_f64()))
        .reduce(f64::min);

    let upper: Vec<&ConvergenceRow> =
        rows.iter().skip(rows.len() / 2).filter(|r| r.error > 0.0 && r.error.is_finite()).collect();
    let fit = linear_fit(
        &upper.iter().map(|r| r.t).collect::<Vec<_>>(),
        &upper.iter().map(|r| r.error.ln()).collect::<Vec<_>>(),
    );
    Ok(ConvergenceProfile {
        big_f: big,
        rows,
        fitted_rate: fit.map(|(s, _, _)| -s),
        r_squared: fit.map(|(_, _, r2)| r2),
        predicted_rate,
    })
}

/// `F_{λ,A₁} / F_{λ,A₂}`.
pub fn ratio_function(
    g: &GroupData,
    ir: &Irrep,
    a1: &EndMatrix,
    a2: &EndMatrix,
    p: &CotangentPoint,
) -> Result<Complex64, GeometryError> {
    let f = kak_decompose(g, p)?;
    let den = big_f_frame(ir, a2, &f);
    if den.norm() < 1e-12 {
        return Err(GeometryError::Vanishing(den.norm()));
    }
    Ok(big_f_frame(ir, a1, &f) / den)
}

#[derive(Clone, Copy, Debug)]
pub struct LaplaceResult {
    pub value: f64,
    pub limit: f64,
    pub error: f64,
}

/// `√det(t ∂²h(λ+ρ) / 2π) ∫ e^{-t ψ_h} P² φ ds` over the positive chamber,
/// against the limit `P(λ+ρ)² φ(λ+ρ)`.
pub fn laplace_test(
    h: &InvariantPotential,
    lambda: &Weight,
    t: f64,
    phi: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<LaplaceResult, GeometryError> {
    let gd = &h.group;
    let m = lambda.add(&gd.rho).as_f64();
    let r = gd.rank;
    let hess = h.hess(&m);
    let det = h.hess_det(&m, DetFrame::CovolumeOne);
    if det <= 0.0 {
        return Err(GeometryError::Singular(det));
    }
    // per-axis windows of twelve standard deviations
    let axes: Vec<Vec<(f64, f64)>> = (0..r)
        .map(|i| {
            let sd = 1.0 / (t * hess[(i, i)]).sqrt();
            let hi = m[i] + 12.0 * sd;
            let lo = (m[i] - 12.0 * sd).max(0.0);
            quadrature::composite_gauss(16, 24, lo, hi)
        })
        .collect();
    let mut nodes: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for ax in &axes {
        nodes = nodes
            .iter()
            .flat_map(|(pt, w)| {
                ax.iter().map(move |&(s, ws)| {
                    let mut q = pt.clone();
                    q.push(s);
                    (q, w * ws)
                })
            })
            .collect();
    }
    let terms: Vec<f64> = nodes
        .par_iter()
        .map(|(s, w)| {
            let pw = gd.weyl_density(s);
            w * (-t * laplace_phase(h, lambda, s)).exp() * pw * pw * phi(s)
        })
        .collect();
    let norm = (det * (t / (2.0 * PI)).powi(r as i32)).sqrt();
    let value = norm * quadrature::tree_sum(&terms);
    let pm = gd.weyl_density(&m);
    let limit = pm * pm * phi(&m);
    if !value.is_finite() {
        return Err(GeometryError::NoConvergence(terms.len()));
    }
    Ok(LaplaceResult { value, limit, error: (value - limit).abs() })
}

/// `e^{2πi <μ - ρ, η>}` with `η` in simple-coroot coordinates. The pairing is
/// reduced mod 1 first, so integral pairings give exactly `1`.
pub fn bs_monodromy_at(g: &GroupData, mu: &[f64], eta: &[i64]) -> Complex64 {
    let x: f64 = mu.iter().zip(&g.rho.0).zip(eta).map(|((m, r), e)| (m - *r as f64) * *e as f64).sum();
    let frac = x - x.round();
    if frac == 0.0 {
        return c(1.0, 0.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * frac)
}

pub fn bs_monodromy(g: &GroupData, eta: &[i64], p: &CotangentPoint) -> Result<Complex64, GeometryError> {
    let f = kak_decompose(g, p)?;
    Ok(bs_monodromy_at(g, &f.xi_plus.coords, eta))
}

#[derive(Clone, Debug)]
pub struct BsRow {
    pub mu: Vec<f64>,
    /// Largest `|m(η) - 1|` over the simple coroots.
    pub defect: f64,
    pub trivial: bool,
}

/// Monodromy over the points `k / denominator`, `k = 1..=count`, of the
/// rank-one chamber.
pub fn bs_scan(g: &GroupData, denominator: u32, count: u32) -> Result<Vec<BsRow>, GeometryError> {
    if g.rank != 1 {
        return Err(GeometryError::Unsupported("scan beyond rank one".into()));
    }
    Ok((1..=count)
        .map(|k| {
            let mu = vec![k as f64 / denominator as f64];
            let defect = (bs_monodromy_at(g, &mu, &[1]) - c(1.0, 0.0)).norm();
            BsRow { mu, defect, trivial: defect == 0.0 }
        })
        .collect())
}

/// Bohr-Sommerfeld points `λ + ρ` inside `(0, upper]` of the rank-one chamber.
pub fn bs_points(g: &GroupData, upper: f64) -> Vec<f64> {
    let r = g.rho.0[0];
    (0..).map(|l| (l + r) as f64).take_while(|&m| m <= upper).collect()
}

/// Data of the limiting state `s^KW_{λ,A}`: a `K × K` orbit at `λ + ρ`
/// carrying the fiber density `(2π)^{r/2} P(λ+ρ)² F_{λ,A}`.
#[derive(Clone, Debug)]
pub struct KwStateData {
    pub irrep: Irrep,
    pub a: EndMatrix,
    pub support: ChamberPoint,
    pub normalization: f64,
}

impl KwStateData {
    pub fn new(g: &GroupData, irrep: Irrep, a: EndMatrix) -> Result<Self, GeometryError> {
        let m = irrep.lambda.add(&g.rho).as_f64();
        if !g.is_regular(&m) {
            return Err(GeometryError::Singular(REGULARITY_THRESHOLD));
        }
        let pm = g.weyl_density(&m);
        let normalization = (2.0 * PI).powf(g.rank as f64 / 2.0) * pm * pm;
        Ok(KwStateData { irrep, a, support: ChamberPoint::new(m), normalization })
    }
}

/// Fiber density at `(k₁, k₂)·(e, λ+ρ)`.
pub fn kw_state_eval(st: &KwStateData, k1: &GroupElement, k2: &GroupElement) -> Complex64 {
    big_f_group(&st.irrep, &st.a, k1, k2) * st.normalization
}

/// Test function `G(μ_inv) · F_{λ,B}` with a Gaussian profile
/// `G(s) = exp(-|s - c|² / 2w²)`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub irrep: Irrep,
    pub b: EndMatrix,
    pub center: Vec<f64>,
    pub width: f64,
}

impl TestFunction {
    pub fn profile(&self, s: &[f64]) -> f64 {
        let d2: f64 = s.iter().zip(&self.center).map(|(a, b)| (a - b).powi(2)).sum();
        (-d2 / (2.0 * self.width * self.width)).exp()
    }

    pub fn eval(&self, g: &GroupData, p: &CotangentPoint) -> Result<Complex64, GeometryError> {
        let f = kak_decompose(g, p)?;
        Ok(big_f_frame(&self.irrep, &self.b, &f) * self.profile(&f.xi_plus.coords))
    }
}

/// `⟨s^KW, ψ⟩ = ∫∫ s^KW(k₁, k₂) conj(ψ((k₁, k₂)·(e, λ+ρ))) dk₁ dk₂` by a
/// product of Haar rules.
pub fn kw_pairing(g: &GroupData, st: &KwStateData, psi: &TestFunction, order: usize) -> Result<Complex64, GeometryError> {
    let rule = haar_quadrature(g, order)?;
    let ra: Vec<CMat> = rule.iter().map(|(x, _)| rep_element(&st.irrep, x)).collect();
    let rb: Vec<CMat> = if psi.irrep.lambda == st.irrep.lambda {
        ra.clone()
    } else {
        rule.iter().map(|(x, _)| rep_element(&psi.irrep, x)).collect()
    };
    // F(k₁, k₂) = Σ_b π(k₁)_{b0} (π(k₂)^* A)_{0b} = u(k₁) · v(k₂)
    let left_a: Vec<Vec<Complex64>> = ra.iter().map(|m| m.column(0).iter().copied().collect()).collect();
    let left_b: Vec<Vec<Complex64>> = rb.iter().map(|m| m.column(0).iter().copied().collect()).collect();
    let right_a: Vec<Vec<Complex64>> = ra.iter().map(|m| (m.adjoint() * &st.a).row(0).iter().copied().collect()).collect();
    let right_b: Vec<Vec<Complex64>> =
        rb.iter().map(|m| (m.adjoint() * &psi.b).row(0).iter().copied().collect()).collect();
    let wts: Vec<f64> = rule.iter().map(|(_, w)| *w).collect();
    let n = rule.len();
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let fa: Complex64 = left_a[i].iter().zip(&right_a[j]).map(|(u, v)| u * v).sum();
            let fb: Complex64 = left_b[i].iter().zip(&right_b[j]).map(|(u, v)| u * v).sum();
            terms.push(fa * fb.conj() * (wts[i] * wts[j]));
        }
    }
    Ok(quadrature::tree_sum_complex(&terms) * st.normalization * psi.profile(&st.support.coords))
}

/// Pairing of the Kähler state `s^{g}_{λ,A}` against a [`TestFunction`].
///
/// Schur orthogonality over `K × K` keeps only the `ν = λ` harmonic and
/// leaves `tr(B^*A)/d² ∫ P² G e^{-ψ_g} (1 + det ∂²g)^{1/2} ds`.
pub fn kahler_pairing(
    g: &InvariantPotential,
    ir: &Irrep,
    a: &EndMatrix,
    psi: &TestFunction,
) -> Result<Complex64, GeometryError> {
    let gd = &g.group;
    if gd.rank != 1 {
        return Err(GeometryError::Unsupported("Kähler pairings beyond rank one".into()));
    }
    if psi.irrep.lambda != ir.lambda {
        return Ok(c(0.0, 0.0));
    }
    let d = ir.dim as f64;
    let tr = (psi.b.adjoint() * a).trace();
    let m = ir.lambda.add(&gd.rho).as_f64();
    let curv = g.hess(&m)[(0, 0)];
    let sd = 1.0 / curv.max(1e-12).sqrt();
    let lo = (m[0] - 14.0 * sd).max(0.0);
    let hi = m[0] + 14.0 * sd + 14.0 * psi.width;
    let rule = quadrature::composite_gauss(16, 64, lo, hi);
    let terms: Vec<f64> = rule
        .iter()
        .map(|&(s, w)| {
            let sv = [s];
            let pw = gd.weyl_density(&sv);
            let ln = -laplace_phase(g, &ir.lambda, &sv) + 0.5 * (1.0 + g.hess_det(&sv, DetFrame::CovolumeOne)).ln();
            w * pw * pw * psi.profile(&sv) * ln.exp()
        })
        .collect();
    Ok(tr * quadrature::tree_sum(&terms) / (d * d))
}
