//! Block-diagonal transforms on Peter-Weyl coefficients: the operator
//! `Q(h)`, the generalized coherent state transform, Hall heat
//! eigenvalues, the operator-valued Fourier transform on K with its
//! Plancherel identity, and the identification `Φ` of limit states with
//! endomorphism blocks.

use crate::algebra::{GeometryError, GroupElement};
use crate::convex::{legendre_full, InvariantPotential};
use crate::kahler::StateTag;
use crate::kw::KwStateData;
use crate::lie::{GroupData, Weight};
use crate::linalg::{c, CMat};
use crate::phase::CotangentPoint;
use crate::repr::{build_irrep, haar_integrate, haar_quadrature, rep_complexified, rep_element, EndMatrix, Irrep};
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

/// Peter-Weyl blocks `λ ↦ A_λ`, standing for `Σ_λ tr(π_λ(·) A_λ)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IsotypicVector {
    pub blocks: BTreeMap<Weight, EndMatrix>,
}

impl IsotypicVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(lambda: Weight, a: EndMatrix) -> Self {
        let mut v = Self::new();
        v.blocks.insert(lambda, a);
        v
    }

    pub fn insert(&mut self, g: &GroupData, lambda: Weight, a: EndMatrix) -> Result<(), GeometryError> {
        let d = g.weyl_dimension(&lambda).map_err(|e| GeometryError::Unsupported(e.to_string()))? as usize;
        if a.nrows() != d || a.ncols() != d {
            return Err(GeometryError::Unsupported(format!("block {:?} must be {d}×{d}", lambda.0)));
        }
        self.blocks.insert(lambda, a);
        Ok(())
    }

    /// Blocks with independent uniform entries in `[-1, 1] + i[-1, 1]`.
    pub fn random(g: &GroupData, lambdas: &[Weight], rng: &mut impl Rng) -> Result<Self, GeometryError> {
        let mut v = Self::new();
        for l in lambdas {
            let d = g.weyl_dimension(l).map_err(|e| GeometryError::Unsupported(e.to_string()))? as usize;
            let a = CMat::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            v.blocks.insert(l.clone(), a);
        }
        Ok(v)
    }

    pub fn scale_blocks(&self, f: impl Fn(&Weight) -> Complex64) -> Self {
        let blocks = self.blocks.iter().map(|(l, a)| (l.clone(), a * f(l))).collect();
        IsotypicVector { blocks }
    }

    pub fn add(&self, o: &IsotypicVector) -> Self {
        let mut out = self.clone();
        for (l, a) in &o.blocks {
            out.blocks.entry(l.clone()).and_modify(|b| *b += a).or_insert_with(|| a.clone());
        }
        out
    }

    pub fn distance(&self, o: &IsotypicVector) -> f64 {
        let diff = self.add(&o.scale_blocks(|_| c(-1.0, 0.0)));
        diff.blocks.values().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }

    /// `Σ_λ tr(π_λ(x) A_λ)`.
    pub fn eval(&self, g: &GroupData, x: &GroupElement) -> Result<Complex64, GeometryError> {
        let mut acc = c(0.0, 0.0);
        for (l, a) in &self.blocks {
            let ir = build_irrep(g, l)?;
            acc += (rep_element(&ir, x) * a).trace();
        }
        Ok(acc)
    }

    /// Highest `λ₁` among the blocks, for choosing quadrature orders.
    pub fn bandwidth(&self) -> usize {
        self.blocks.keys().map(|l| l.0.iter().sum::<i64>() as usize).max().unwrap_or(0)
    }

    /// `Σ_λ tr(A_λ^* A_λ) / d_λ`, the `L²(K)` norm² by Schur orthogonality.
    pub fn l2_norm_sq(&self) -> f64 {
        self.blocks.values().map(|a| (a.adjoint() * a).trace().re / a.nrows() as f64).sum()
    }
}

/// `Q(h)`: block `λ` multiplied by `h(λ + ρ)`.
pub fn quantum_op(h: &InvariantPotential, v: &IsotypicVector) -> IsotypicVector {
    let rho = &h.group.rho;
    v.scale_blocks(|l| c(h.value(&l.add(rho).as_f64()), 0.0))
}

/// Transport time and direction together with the source polarization.
#[derive(Clone, Debug)]
pub struct TransformSpec {
    pub h: InvariantPotential,
    pub t: f64,
    pub source: StateTag,
}

/// `C_{t,h}` in the frame of the states `σ^g_{λ,A}`: coefficients are
/// unchanged and the polarization tag moves from `g` to `g + t h`.
pub fn gcst(spec: &TransformSpec, v: &IsotypicVector) -> Result<(IsotypicVector, StateTag), GeometryError> {
    if spec.t < 0.0 {
        return Err(GeometryError::Unsupported("negative transport time".into()));
    }
    if spec.t > 0.0 && !spec.h.is_uniformly_convex() {
        return Err(GeometryError::Unsupported("transport needs a uniformly convex h".into()));
    }
    let tag = if spec.t == 0.0 {
        spec.source.clone()
    } else {
        match &spec.source {
            StateTag::Schrodinger => StateTag::Kahler(spec.h.scaled(spec.t)),
            StateTag::Kahler(g) => StateTag::Kahler(g.plus(spec.t, &spec.h)),
            StateTag::KirwinWu => return Err(GeometryError::Unsupported("transport from the limit".into())),
        }
    };
    Ok((v.clone(), tag))
}

/// The potential carried by a tag; Schrödinger states sit at `g = 0`.
pub fn tag_potential(g: &GroupData, tag: &StateTag) -> Result<InvariantPotential, GeometryError> {
    match tag {
        StateTag::Schrodinger => Ok(InvariantPotential::zero(g)),
        StateTag::Kahler(p) => Ok(p.clone()),
        StateTag::KirwinWu => Err(GeometryError::Unsupported("limit states have no potential".into())),
    }
}

/// `e^{-g(λ+ρ)} tr(π_λ(x e^{i L_g(ξ)}) A)`, the holomorphic factor of
/// `σ^g_{λ,A}`.
pub fn holomorphic_part(
    g: &InvariantPotential,
    ir: &Irrep,
    a: &EndMatrix,
    p: &CotangentPoint,
) -> Result<Complex64, GeometryError> {
    let m = ir.lambda.add(&g.group.rho).as_f64();
    let y = legendre_full(g, &p.xi)?;
    Ok((rep_complexified(ir, &p.x, &y) * a).trace() * (-g.value(&m)).exp())
}

/// `e^{t ĥ} e^{-t Q(h)}` applied to `σ^g_{λ,A}` at `p`, holomorphic factor
/// only: the eigenvalue `e^{-t h(λ+ρ)}` followed by analytic continuation
/// along the imaginary-time flow `x ↦ x e^{i t L_h(ξ)}`.
pub fn transport_pointwise(
    g: &InvariantPotential,
    h: &InvariantPotential,
    t: f64,
    ir: &Irrep,
    a: &EndMatrix,
    p: &CotangentPoint,
) -> Result<Complex64, GeometryError> {
    let m = ir.lambda.add(&g.group.rho).as_f64();
    let yg = legendre_full(g, &p.xi)?;
    let yh = legendre_full(h, &p.xi)?.scale(t);
    let n = p.x.n();
    let flowed = rep_complexified(ir, &p.x, &yg) * rep_complexified(ir, &GroupElement::identity(n), &yh);
    Ok((flowed * a).trace() * (-g.value(&m) - t * h.value(&m)).exp())
}

/// Eigenvalue of the Laplacian on the `λ` block:
/// `½<λ+ρ, λ+ρ> - ½<ρ, ρ>`.
pub fn hall_heat_eigenvalue(g: &GroupData, lambda: &Weight) -> f64 {
    let m = lambda.add(&g.rho).as_f64();
    0.5 * g.norm_sq(&m) - 0.5 * g.norm_sq(&g.rho.as_f64())
}

/// `F̂(π_λ) = ∫_K F(x) π_λ(x)^* dx` with a Haar rule of the given order.
pub fn fourier_hat(
    g: &GroupData,
    f: impl Fn(&GroupElement) -> Complex64,
    lambda: &Weight,
    order: usize,
) -> Result<EndMatrix, GeometryError> {
    let ir = build_irrep(g, lambda)?;
    let rule = haar_quadrature(g, order)?;
    let d = ir.dim;
    let mut out = CMat::zeros(d, d);
    for (x, w) in &rule {
        out += rep_element(&ir, x).adjoint() * (f(x) * *w);
    }
    Ok(out)
}

/// Exact Fourier blocks of a finite Peter-Weyl sum: `F̂(π_λ) = A_λ / d_λ`.
pub fn fourier_blocks(v: &IsotypicVector) -> IsotypicVector {
    v.scale_blocks(|l| c(1.0 / block_dim(v, l) as f64, 0.0))
}

fn block_dim(v: &IsotypicVector, l: &Weight) -> usize {
    v.blocks[l].nrows()
}

/// `Σ_λ d_λ tr(F̂(π_λ)^* F̂(π_λ))`.
pub fn plancherel_sum(hats: &IsotypicVector) -> f64 {
    hats.blocks.values().map(|b| b.nrows() as f64 * (b.adjoint() * b).trace().re).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlancherelReport {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

impl PlancherelReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        PlancherelReport { lhs, rhs, diff: (lhs - rhs).abs() }
    }
}

/// `‖F‖²` by Haar quadrature against `Σ d_λ tr(F̂^*F̂)` with the exact
/// blocks `A_λ / d_λ`.
pub fn plancherel_check(g: &GroupData, v: &IsotypicVector) -> Result<PlancherelReport, GeometryError> {
    let rule = haar_quadrature(g, v.bandwidth() + 1)?;
    let lhs = haar_integrate(&rule, |x| c(v.eval(g, x).map(|z| z.norm_sqr()).unwrap_or(f64::NAN), 0.0)).re;
    Ok(PlancherelReport::new(lhs, plancherel_sum(&fourier_blocks(v))))
}

/// Both sides by quadrature: `‖F‖²` on a Haar rule and each block through
/// [`fourier_hat`], for `F` given as a callable of declared bandwidth.
pub fn plancherel_by_quadrature(
    g: &GroupData,
    f: impl Fn(&GroupElement) -> Complex64 + Copy,
    bandwidth: usize,
) -> Result<PlancherelReport, GeometryError> {
    let order = bandwidth + 2;
    let rule = haar_quadrature(g, order)?;
    let lhs = haar_integrate(&rule, |x| c(f(x).norm_sqr(), 0.0)).re;
    let mut hats = IsotypicVector::new();
    for l in 0..=bandwidth as i64 {
        hats.blocks.insert(Weight(vec![l]), fourier_hat(g, f, &Weight(vec![l]), order)?);
    }
    Ok(PlancherelReport::new(lhs, plancherel_sum(&hats)))
}

/// `Φ(σ^{+∞}_{λ,A}) = A`.
pub fn phi_iso(st: &KwStateData) -> EndMatrix {
    st.a.clone()
}

/// `‖σ^{+∞}_{λ,A}‖² = tr(A^*A) / d_λ`, the norm carried over from the
/// Kähler states.
pub fn kw_norm_sq(st: &KwStateData) -> f64 {
    (st.a.adjoint() * &st.a).trace().re / st.irrep.dim as f64
}
