//! Finite-index and stabilizer checks for several families of pairs.

use heckepair::arith::{vec2, Mat2, Rat};
use heckepair::grouppair::{BaseRing, PairDescriptor};

fn main() -> heckepair::Result<()> {
    let pairs = [
        (
            PairDescriptor::full_gl2(BaseRing::ZInvP(3))?,
            vec![Mat2::diag(3, 1), Mat2::diag(9, 3)],
            vec![vec2(Rat::new(1, 3), 0), vec2(Rat::new(1, 9), Rat::new(2, 3))],
        ),
        (
            PairDescriptor::quad_torus(2)?,
            vec![Mat2::new(2, 2, 1, 2), Mat2::new(3, 2, 1, 3)],
            vec![vec2(Rat::new(1, 2), 0), vec2(Rat::new(1, 3), Rat::new(1, 3))],
        ),
        (
            PairDescriptor::heisenberg()?,
            vec![
                Mat2::new(Rat::one(), Rat::new(1, 6), Rat::zero(), Rat::one()),
                Mat2::new(Rat::one(), Rat::new(1, 12), Rat::zero(), Rat::one()),
            ],
            vec![vec2(0, Rat::new(1, 4))],
        ),
    ];
    for (pair, qs, ns) in pairs {
        println!("{}", pair.describe());
        let report = pair.is_hecke_pair(&qs, &ns)?;
        for e in &report.entries {
            println!("  [{}] {:<24} {}", e.kind, e.element, e.index.as_deref().unwrap_or("?"));
        }
        println!("  finite indices: {:?}", report.verdict);
        let mut xs = Vec::new();
        for q in &qs {
            xs.push(pair.q_elem(q.clone())?);
        }
        for n in &ns {
            xs.push(pair.n_elem(n.clone())?);
        }
        let stab = pair.verify_stabilizer_identities(&xs, &pair.h_generators())?;
        println!("  stabilizer identities: {} checks, {:?}", stab.checks, stab.verdict);
        println!("  reduced along {} elements: {:?}", qs.len(), pair.reduced_check(&qs)?.verdict);
    }
    Ok(())
}
