//! Half-form corrected Kähler states along the Casimir ray: the norm of
//! `tr(π_λ(·) A)` stays at `tr(A*A)/d_λ` for every `t`.

use kwlab::convex::InvariantPotential;
use kwlab::kahler::{half_density, state_norm, QuantumState, StateTag};
use kwlab::lie::{GroupData, Weight};
use kwlab::phase::CotangentPoint;
use kwlab::repr::{build_irrep, matrix_unit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let q = InvariantPotential::quadratic(&g);
    println!("{:>4} {:>6} {:>14} {:>10}", "λ", "t", "‖s‖²", "1/d");
    for l in 0..4 {
        let ir = build_irrep(&g, &Weight::new(&[l]))?;
        for t in [0.5, 1.0, 2.0, 4.0] {
            let st = QuantumState::new(ir.clone(), matrix_unit(ir.dim, 0, 0), StateTag::Kahler(q.scaled(t)))?;
            println!("{l:>4} {t:>6} {:>14.10} {:>10.6}", state_norm(&st, None)?, 1.0 / ir.dim as f64);
        }
    }

    let h = InvariantPotential::quartic_plus_quadratic(&g);
    println!("half-form density along the chamber for the quartic potential:");
    for s in [0.1, 0.5, 1.0, 2.0, 3.0] {
        println!("  s = {s}: {:.6e}", half_density(&h, &CotangentPoint::on_chamber(2, &[s]))?);
    }
    Ok(())
}
