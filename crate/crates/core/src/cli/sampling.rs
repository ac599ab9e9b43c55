use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::{vec2, Mat2, Rat, Vec2};
use crate::grouppair::{BaseRing, Family, GElem, PairDescriptor, QKind};

/// Sample elements for a verification campaign.
#[derive(Clone, Debug)]
pub struct Samples {
    pub q: Vec<Mat2>,
    pub n: Vec<Vec2>,
    pub h: Vec<GElem>,
    /// A sequence whose `M`-stabilizers shrink, for the reducedness check.
    pub stage: Vec<Mat2>,
}

fn small_denominators(pair: &PairDescriptor) -> Vec<i64> {
    match pair.base_ring() {
        BaseRing::ZInvP(p) => vec![p as i64, (p * p) as i64],
        BaseRing::Rationals => vec![2, 3, 4, 6],
    }
}

fn random_r<R: Rng>(pair: &PairDescriptor, rng: &mut R) -> Mat2 {
    let gens = pair.r_generators();
    let mut x = Mat2::identity();
    for _ in 0..rng.gen_range(0..=3) {
        let g = gens.choose(rng).expect("R has generators");
        let g = if rng.gen_bool(0.5) { g.clone() } else { g.inverse().expect("invertible") };
        x = x.mul(&g);
    }
    x
}

fn random_n<R: Rng>(pair: &PairDescriptor, rng: &mut R) -> Vec2 {
    let dens = small_denominators(pair);
    let d1 = *dens.choose(rng).expect("nonempty");
    let d2 = *dens.choose(rng).expect("nonempty");
    vec2(Rat::new(rng.gen_range(0..d1), d1), Rat::new(rng.gen_range(0..d2), d2))
}

fn random_q<R: Rng>(pair: &PairDescriptor, rng: &mut R) -> Mat2 {
    loop {
        let q = match pair.q_kind() {
            QKind::FullGL2 => {
                let (x, y) = match pair.base_ring() {
                    BaseRing::ZInvP(p) => {
                        let p = p as i64;
                        (p.pow(rng.gen_range(0..=2)), p.pow(rng.gen_range(0..=1)))
                    }
                    BaseRing::Rationals => (*[1, 2, 3, 4].choose(rng).unwrap(), *[1, 2, 3].choose(rng).unwrap()),
                };
                random_r(pair, rng).mul(&Mat2::diag(x, y)).mul(&random_r(pair, rng))
            }
            QKind::QuadTorus(d) => {
                let (m, n) = (rng.gen_range(-3i64..=3), rng.gen_range(-2i64..=2));
                Mat2::new(m, d * n, n, m)
            }
            QKind::Unipotent => {
                let k = rng.gen_range(1i64..=6);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                Mat2::new(1, Rat::new(sign, k), 0, 1)
            }
        };
        if pair.in_q(&q) {
            return q;
        }
    }
}

fn random_h<R: Rng>(pair: &PairDescriptor, rng: &mut R) -> GElem {
    let gens = pair.h_generators();
    let mut x = pair.identity();
    for _ in 0..rng.gen_range(0..=4) {
        let g = gens.choose(rng).expect("H has generators");
        let g = if rng.gen_bool(0.5) { g.clone() } else { pair.inv(g).expect("in G") };
        x = pair.mul(&x, &g).expect("in G");
    }
    x
}

/// The default `q`-samples of a family followed by `extra` random ones.
pub fn draw<R: Rng>(pair: &PairDescriptor, extra: usize, rng: &mut R) -> Samples {
    let (mut q, mut n, stage) = match (pair.family(), pair.q_kind(), pair.base_ring()) {
        (Family::Heisenberg, _, _) => {
            let t = |k: i64| Mat2::new(1, Rat::new(1, k), 0, 1);
            (
                vec![t(2), t(3), t(6)],
                vec![vec2(Rat::new(1, 2), Rat::new(1, 3)), vec2(0, Rat::new(1, 4))],
                vec![t(2), t(4)],
            )
        }
        (_, QKind::QuadTorus(d), _) => {
            let a = Mat2::new(d, d, 1, d);
            (
                vec![a.clone(), Mat2::new(2, d, 1, 2), Mat2::scalar(2)],
                vec![vec2(Rat::new(1, 2), 0), vec2(Rat::new(1, 3), Rat::new(2, 3))],
                vec![a.clone(), a.mul(&a)],
            )
        }
        (_, _, BaseRing::ZInvP(p)) => {
            let p = p as i64;
            (
                vec![
                    Mat2::diag(p, 1),
                    Mat2::diag(p * p, p),
                    Mat2::new(1, 1, 0, 1).mul(&Mat2::diag(p, 1)),
                ],
                vec![vec2(Rat::new(1, p), 0), vec2(Rat::new(1, p * p), Rat::new(1, p))],
                vec![Mat2::diag(p, 1), Mat2::diag(p * p, 1)],
            )
        }
        (_, _, BaseRing::Rationals) => (
            vec![Mat2::diag(2, 1), Mat2::diag(3, 1), Mat2::diag(4, 2)],
            vec![vec2(Rat::new(1, 2), 0), vec2(Rat::new(1, 3), Rat::new(1, 2))],
            vec![Mat2::diag(2, 1), Mat2::diag(4, 1)],
        ),
    };
    for _ in 0..extra {
        q.push(random_q(pair, rng));
        n.push(random_n(pair, rng));
    }
    let h = (0..extra.max(2) + 2).map(|_| random_h(pair, rng)).collect();
    Samples { q, n, h, stage }
}
