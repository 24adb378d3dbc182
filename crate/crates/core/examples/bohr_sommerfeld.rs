//! Monodromy of the prequantum connection along the invariant torus fibers: trivial
//! exactly on the shifted weight lattice.

use kwlab::kw::{bs_points, bs_scan};
use kwlab::lie::GroupData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    println!("Bohr-Sommerfeld values of μ_inv up to 6: {:?}", bs_points(&g, 6.0));
    let rows = bs_scan(&g, 20, 80)?;
    for r in rows.iter().filter(|r| r.trivial || (r.mu[0] * 4.0).fract() == 0.0) {
        println!("μ = {:5.2}  |m − 1| = {:.6}{}", r.mu[0], r.defect, if r.trivial { "  trivial" } else { "" });
    }
    Ok(())
}
