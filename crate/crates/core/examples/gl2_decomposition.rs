//! Factoring matrices as lower triangular times integral, locally at `p` and
//! globally, plus surjectivity of `GL(2, ℤ)` onto determinant ±1 residues.

use heckepair::arith::{Mat2, Rat};
use heckepair::families::{certify_th_global, certify_th_p, slpm_surjectivity, th_decompose_global, th_decompose_p};

fn main() -> heckepair::Result<()> {
    let g = Mat2::new(Rat::one(), Rat::new(1, 3), Rat::zero(), Rat::one());
    let dec = th_decompose_p(&g, 3)?;
    println!("{g} = {} · {}   certified {}", dec.t, dec.k, certify_th_p(&g, &dec, 3));

    let g = Mat2::new(Rat::new(3, 2), Rat::new(5, 4), Rat::new(-1, 3), Rat::new(7, 6));
    let dec = th_decompose_global(&g)?;
    println!("{g} = {} · {}   certified {}", dec.t, dec.k, certify_th_global(&g, &dec));

    for s in [4u64, 6, 12] {
        let r = slpm_surjectivity(s, 1 << 20)?;
        println!("mod {s:2}: image {:5} of {:5} matrices with det ±1", r.image_size, r.exhaustive_size);
    }
    Ok(())
}
