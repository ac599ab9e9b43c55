//! Convolution and the involution in the Hecke algebra of `GL(2, ℤ[1/2])`.

use heckepair::arith::{Mat2, Rat};
use heckepair::cosets::HeckeAlgebra;
use heckepair::grouppair::{BaseRing, PairDescriptor};

fn main() -> heckepair::Result<()> {
    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(2))?;
    let alg = HeckeAlgebra::new(pair.clone());
    let t = alg.chi(&pair.q_elem(Mat2::diag(2, 1))?)?;
    let s = alg.term(&pair.q_elem(Mat2::scalar(2))?, &Rat::new(1, 2))?;
    let f = t.add(&s);

    let square = alg.convolve(&t, &t)?;
    println!("T*T = {}", square.to_json());
    println!("T* = {}", alg.involution(&t)?.to_json());
    println!("f = {}", f.to_json());
    println!("f*T = {}", alg.convolve(&f, &t)?.to_json());

    let one = alg.identity();
    println!("χ_H * f == f: {}", alg.convolve(&one, &f)? == f);
    let lhs = alg.involution(&alg.convolve(&f, &t)?)?;
    let rhs = alg.convolve(&alg.involution(&t)?, &alg.involution(&f)?)?;
    println!("(f*T)* == T* * f*: {}", lhs == rhs);
    Ok(())
}
