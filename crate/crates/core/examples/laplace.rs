//! The squared Kähler densities concentrate on the Bohr-Sommerfeld shell with an
//! O(1/t) error.

use kwlab::convex::InvariantPotential;
use kwlab::kw::laplace_test;
use kwlab::lie::{GroupData, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let bump = |s: &[f64]| (-(s[0] - 3.0).powi(2)).exp() / (s[0] * s[0]);
    let lam = Weight::new(&[2]);
    for (name, h) in [("quadratic", InvariantPotential::quadratic(&g)), ("quartic", InvariantPotential::quartic_plus_quadratic(&g))] {
        println!("{name}:");
        let mut prev: Option<f64> = None;
        for t in [1e1, 1e2, 1e3, 1e4] {
            let r = laplace_test(&h, &lam, t, bump)?;
            let ratio = prev.map(|e| format!("{:.3}", e / r.error)).unwrap_or_default();
            println!("  t = {t:>6}: value {:.10} limit {:.10} error {:.3e} {ratio}", r.value, r.limit, r.error);
            prev = Some(r.error);
        }
    }
    Ok(())
}
