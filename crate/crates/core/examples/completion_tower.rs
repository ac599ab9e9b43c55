//! Finite stages of the completion of `H` for `GL(2, ℤ[1/2])`, built from the
//! seeds `diag(2,1)` and `diag(4,1)`, with the reduction maps between them.

use heckepair::arith::Mat2;
use heckepair::grouppair::{BaseRing, PairDescriptor};
use heckepair::tower::{build_tower, compare_quotient, verify_stage};

fn main() -> heckepair::Result<()> {
    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(2))?;
    let seeds = [Mat2::diag(2, 1), Mat2::diag(4, 1)];
    let tower = build_tower(&pair, &seeds, None)?;

    for (k, st) in tower.stages.iter().enumerate() {
        let (d1, d2) = st.quot_m.invariant_factors();
        let checks = verify_stage(&pair, st)?;
        println!(
            "stage {k}: |E/R| = {:2}  M/M_E = Z/{d1} x Z/{d2}  [R:R^E_F] = {:5}  order = {:6}  mod {}  checks {:?}",
            st.e.len(),
            st.index_r(),
            st.order(),
            st.modulus(),
            checks.verdict,
        );
        if st.order() <= 2000 {
            println!("         quotient table vs group law: {:?}", compare_quotient(&pair, st)?.verdict);
        }
    }
    for (fine, coarse, m) in &tower.maps {
        println!(
            "map {fine} -> {coarse}: image {} of {}, kernel {}, homomorphism {}",
            m.image_size, m.coarse_order, m.kernel_size, m.homomorphism
        );
    }
    for ((i, j, k), ok) in tower.triangles() {
        println!("triangle {i} -> {j} -> {k} commutes: {ok}");
    }
    Ok(())
}
