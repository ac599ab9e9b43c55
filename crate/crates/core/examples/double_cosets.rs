//! Left cosets inside double cosets `HxH` and the modular function `Δ`.

use heckepair::arith::{vec2, Mat2, Rat};
use heckepair::cosets::CosetEngine;
use heckepair::grouppair::{BaseRing, PairDescriptor};

fn main() -> heckepair::Result<()> {
    for p in [2i64, 3, 5] {
        let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(p as u64))?;
        let engine = CosetEngine::new(pair.clone());
        let elems = [
            pair.q_elem(Mat2::diag(p, 1))?,
            pair.q_elem(Mat2::diag(1, p))?,
            pair.n_elem(vec2(Rat::new(1, p), 0))?,
            pair.elem(vec2(Rat::new(1, p), 0), Mat2::diag(p, 1))?,
        ];
        println!("Z[1/{p}]");
        for x in &elems {
            let by_formula = match engine.l_by_indices(x) {
                Some(l) => l?.to_string(),
                None => "-".into(),
            };
            println!(
                "  {x:<28} L = {:3} (index formula {by_formula:>3})  Δ = {}",
                engine.l_of(x)?,
                engine.delta(x)?
            );
        }
    }

    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(2))?;
    let engine = CosetEngine::new(pair.clone());
    let a = pair.q_elem(Mat2::diag(2, 1))?;
    let b = pair.q_elem(Mat2::diag(1, 2))?;
    println!(
        "H diag(2,1) H = H diag(1,2) H: {}",
        engine.canonical_key(&a)? == engine.canonical_key(&b)?
    );
    for y in engine.left_coset_reps(&a)?.iter().take(4) {
        println!("  left coset rep {y}");
    }
    Ok(())
}
