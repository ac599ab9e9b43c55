//! Canonical forms, sums, intersections and indices of planar lattices.

use heckepair::arith::{vec2, Lattice, Mat2, Rat};

fn main() -> heckepair::Result<()> {
    let l1 = Lattice::hnf(&Mat2::new(2, 1, 4, 3))?;
    let l2 = Lattice::from_generators(&[vec2(3, 0), vec2(1, 1)])?;
    println!("L1 = {l1}  det {}", l1.det());
    println!("L2 = {l2}  det {}", l2.det());
    println!("L1 + L2 = {}", l1.sum(&l2));
    println!("L1 ∩ L2 = {}", l1.intersect(&l2));

    let z2 = Lattice::standard();
    let meet = l1.intersect(&l2);
    let (d1, d2) = meet.smith_invariants()?;
    println!("[Z² : L1 ∩ L2] = {}  ≅ Z/{d1} x Z/{d2}", z2.index_of(&meet)?);

    let q = Mat2::diag(Rat::new(1, 2), 3);
    let moved = z2.transform(&q)?;
    println!("diag(1/2, 3)·Z² = {moved}");
    println!("Z² ∩ diag(1/2, 3)·Z² = {}", z2.intersect(&moved));
    println!("(7, -4) mod L1 = {:?}", l1.reduce(&vec2(7, -4)));
    Ok(())
}
