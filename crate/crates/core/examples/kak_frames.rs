//! Points of T*SU(2) in K×A×K form, the invariant moment map, and the residual
//! torus gauge.

use kwlab::algebra::GroupElement;
use kwlab::lie::GroupData;
use kwlab::phase::{dist_points, kak_decompose, moment_maps, mu_inv, tinv_act, CotangentPoint};
use rand::SeedableRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupData::su2();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let p = CotangentPoint::random(2, &mut rng);
        let f = kak_decompose(&g, &p)?;
        let (left, right) = moment_maps(&p);
        println!(
            "μ_inv = {:.5}  |μ_L|² = {:.5}  |μ_R|² = {:.5}  residual {:.1e}",
            mu_inv(&p).coords[0],
            left.norm_sq(),
            right.norm_sq(),
            dist_points(&f.point(), &p)
        );
        let t = GroupElement::torus(&[0.7]);
        let q = tinv_act(&g, &p, &t)?;
        println!("    after the torus action μ_inv = {:.5}", mu_inv(&q).coords[0]);
    }
    Ok(())
}
