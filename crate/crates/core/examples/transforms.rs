//! The generalized coherent state transform acts blockwise on Peter-Weyl
//! coefficients; its limit identifies states with the operator-valued Fourier
//! transform.

use kwlab::convex::InvariantPotential;
use kwlab::kahler::StateTag;
use kwlab::kw::KwStateData;
use kwlab::lie::{GroupData, Weight};
use kwlab::transforms::{
    gcst, hall_heat_eigenvalue, kw_norm_sq, phi_iso, plancherel_by_quadrature, plancherel_check, IsotypicVector,
    TransformSpec,
};
use rand::SeedableRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let q = InvariantPotential::quadratic(&g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let lams: Vec<Weight> = (0..4).map(|l| Weight::new(&[l])).collect();
    let v = IsotypicVector::random(&g, &lams, &mut rng)?;

    let exact = plancherel_check(&g, &v)?;
    let quad = plancherel_by_quadrature(&g, |x| v.eval(&g, x).unwrap(), v.bandwidth())?;
    println!("‖F‖² = {:.12}, Σ d tr(F̂*F̂) = {:.12} (quadrature {:.12})", exact.lhs, exact.rhs, quad.rhs);

    let (moved, tag) = gcst(&TransformSpec { h: q.clone(), t: 1.5, source: StateTag::Schrodinger }, &v)?;
    println!("gcst at t = 1.5 lands in {tag:?}");
    for (l, block) in &moved.blocks {
        println!("  λ = {}: heat eigenvalue {:.3}, block norm {:.6}", l.0[0], hall_heat_eigenvalue(&g, l), block.norm());
    }

    for (l, a) in &v.blocks {
        let st = KwStateData::new(&g, kwlab::repr::build_irrep(&g, l)?, a.clone())?;
        println!("limit state λ = {}: ‖σ‖² = {:.6}, Φ(σ) = A: {}", l.0[0], kw_norm_sq(&st), phi_iso(&st) == *a);
    }
    Ok(())
}
