//! Root data, Weyl dimensions and Schur orthogonality on SU(2), with a peek at SU(3).

use kwlab::lie::{GroupData, GroupId, Weight};
use kwlab::repr::{build_irrep, character, haar_integrate, haar_quadrature};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let su3 = GroupData::new(GroupId::SU3)?;
    println!("SU(3): rank {}, {} positive roots, ρ = {:?}", su3.rank, su3.num_positive_roots(), su3.rho.0);
    for l in [[1, 0], [1, 1], [2, 1], [3, 3]] {
        println!("  dim V{:?} = {}", l, su3.weyl_dimension(&Weight::new(&l))?);
    }

    let g = GroupData::su2();
    let rule = haar_quadrature(&g, 8)?;
    println!("SU(2) characters, ∫ χ_λ conj(χ_μ) dx:");
    for a in 0..4 {
        let ia = build_irrep(&g, &Weight::new(&[a]))?;
        let row: Vec<String> = (0..4)
            .map(|b| {
                let ib = build_irrep(&g, &Weight::new(&[b])).unwrap();
                let v = haar_integrate(&rule, |x| character(&ia, x) * character(&ib, x).conj());
                format!("{:6.3}", v.re)
            })
            .collect();
        println!("  λ={a} (d={}): {}", ia.dim, row.join(" "));
    }
    Ok(())
}
