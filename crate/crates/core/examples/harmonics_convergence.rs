//! Torus harmonics of a matrix coefficient and their exponential collapse onto the
//! highest weight as the polarization degenerates.

use kwlab::algebra::{FullDualElement, GroupElement};
use kwlab::convex::InvariantPotential;
use kwlab::kw::{convergence_profile, harmonics, spectral_gaps};
use kwlab::lie::{GroupData, Weight};
use kwlab::linalg::{c, CMat};
use kwlab::phase::CotangentPoint;
use kwlab::repr::build_irrep;
use rand::{Rng, SeedableRng};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let q = InvariantPotential::quadratic(&g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let ir = build_irrep(&g, &Weight::new(&[2]))?;
    let a = CMat::from_fn(ir.dim, ir.dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let u = GroupElement::random(2, &mut rng);
    let p = CotangentPoint::new(GroupElement::random(2, &mut rng), FullDualElement::from_chamber(2, &[1.0]).conjugate(&u));

    let tab = harmonics(&q, &ir, &a, &p)?;
    for (nu, v) in tab.entries() {
        println!("ν = {:>2}: {v:.6}", nu.0[0]);
    }
    for (nu, gap) in spectral_gaps(&q, &ir, &[1.0]) {
        println!("gap to ν = {}: {gap}", nu.0[0]);
    }

    let ts: Vec<f64> = (0..=30).map(|k| 10.0 + k as f64).collect();
    let prof = convergence_profile(&q, &q, &ir, &a, &p, &ts)?;
    for row in prof.rows.iter().step_by(6) {
        println!("t = {:>4}: error {:.4e}", row.t, row.error);
    }
    println!(
        "fitted rate {:.6}, predicted {:.6}, R² {:.8}",
        prof.fitted_rate.unwrap_or(f64::NAN),
        prof.predicted_rate.unwrap_or(f64::NAN),
        prof.r_squared.unwrap_or(f64::NAN)
    );
    Ok(())
}
