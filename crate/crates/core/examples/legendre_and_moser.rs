//! Invariant convex potentials: Legendre maps, the full Hessian, and the Moser
//! diffeomorphism that pulls one Kähler structure back to another.

use kwlab::algebra::FullDualElement;
use kwlab::convex::{hessian_full_matrix, legendre, legendre_inverse, moser_map, InvariantPotential};
use kwlab::kahler::matrix_coeff;
use kwlab::lie::{GroupData, Weight};
use kwlab::phase::CotangentPoint;
use kwlab::repr::{build_irrep, matrix_unit};
use rand::SeedableRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let q = InvariantPotential::quadratic(&g);
    let h = InvariantPotential::quartic_plus_quadratic(&g);

    println!("{:>6} {:>12} {:>12} {:>12}", "s", "L_q(s)", "L_h(s)", "round trip");
    for s in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let y = legendre(&h, &[s]);
        let back = legendre_inverse(&h, &y)?;
        println!("{s:>6} {:>12.6} {:>12.6} {:>12.2e}", legendre(&q, &[s]).y[0], y.y[0], (back.coords[0] - s).abs());
    }

    let xi = FullDualElement::from_chamber(2, &[1.5]);
    println!("Hessian of the quartic potential at s = 1.5:\n{}", hessian_full_matrix(&h, &xi)?);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let ir = build_irrep(&g, &Weight::new(&[2]))?;
    let a = matrix_unit(ir.dim, 0, 1);
    let p = CotangentPoint::random_with_chamber(2, 0.2, 1.5, &mut rng);
    for t in [0.5, 1.0, 2.0] {
        let pulled = matrix_coeff(&h, &ir, &a, &moser_map(&h, &q, t, &p)?)?;
        let direct = matrix_coeff(&h.plus(t, &q), &ir, &a, &p)?;
        println!("t = {t}: f∘ψ_t = {pulled:.6}, f^(h+tq) = {direct:.6}");
    }
    Ok(())
}
