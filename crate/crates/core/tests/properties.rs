use heckepair::arith::{vec2, Lattice, Mat2, Rat};
use heckepair::cosets::{CosetEngine, HeckeAlgebra};
use heckepair::families::{certify_th_p, th_decompose_p};
use heckepair::grouppair::{BaseRing, GElem, PairDescriptor};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

fn z2() -> &'static PairDescriptor {
    static PAIR: OnceLock<PairDescriptor> = OnceLock::new();
    PAIR.get_or_init(|| PairDescriptor::full_gl2(BaseRing::ZInvP(2)).unwrap())
}

fn engine() -> &'static CosetEngine {
    static ENGINE: OnceLock<CosetEngine> = OnceLock::new();
    ENGINE.get_or_init(|| CosetEngine::new(z2().clone()))
}

fn algebra() -> &'static HeckeAlgebra {
    static ALG: OnceLock<HeckeAlgebra> = OnceLock::new();
    ALG.get_or_init(|| HeckeAlgebra::new(z2().clone()))
}

fn word(pair: &PairDescriptor, gens: &[GElem], w: &[(usize, bool)]) -> GElem {
    w.iter().fold(pair.identity(), |x, &(i, inv)| {
        let g = &gens[i % gens.len()];
        let g = if inv { pair.inv(g).unwrap() } else { g.clone() };
        pair.mul(&x, &g).unwrap()
    })
}

fn h_word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..6)
}

/// Small elements of `G` with at most a few left cosets in their double coset.
fn g_elem() -> impl Strategy<Value = GElem> {
    (0usize..6, 0i64..2, 0i64..2, 0usize..3).prop_map(|(qi, nx, ny, si)| {
        let pair = z2();
        let q = [
            Mat2::identity(),
            Mat2::diag(2, 1),
            Mat2::diag(1, 2),
            Mat2::diag(4, 2),
            Mat2::diag(Rat::new(1, 2), 1),
            Mat2::new(1, 1, 0, 1).mul(&Mat2::diag(2, 1)),
        ][qi]
            .clone();
        let scale = [1, 2, 4][si];
        pair.elem(vec2(Rat::new(nx, scale), Rat::new(ny, 2)), q).unwrap()
    })
}

fn hnf_lattice() -> impl Strategy<Value = Lattice> {
    (1i64..8, 1i64..8, 0i64..8, -3i64..4, 1i64..4).prop_map(|(a, d, c, k, den)| {
        let basis = Mat2::new(Rat::new(a, den), 0, Rat::new(c, den), Rat::new(d, den));
        // a unimodular change of basis must not change the lattice
        Lattice::hnf(&basis.mul(&Mat2::new(1, k, 0, 1))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn key_is_stable_under_h_multiplication(x in g_elem(), w1 in h_word(), w2 in h_word()) {
        let pair = z2();
        let gens = pair.h_generators();
        let h1 = word(pair, &gens, &w1);
        let h2 = word(pair, &gens, &w2);
        let y = pair.mul(&pair.mul(&h1, &x).unwrap(), &h2).unwrap();
        prop_assert_eq!(engine().canonical_key(&x).unwrap(), engine().canonical_key(&y).unwrap());
    }

    #[test]
    fn delta_is_constant_on_the_double_coset(x in g_elem()) {
        let d = engine().delta(&x).unwrap();
        for y in engine().left_coset_reps(&x).unwrap() {
            prop_assert_eq!(&engine().delta(&y).unwrap(), &d);
        }
    }

    #[test]
    fn delta_of_inverse_is_reciprocal(x in g_elem()) {
        let xi = z2().inv(&x).unwrap();
        let prod = engine().delta(&x).unwrap() * engine().delta(&xi).unwrap();
        prop_assert!(prod.is_one());
    }

    #[test]
    fn cache_does_not_change_results(x in g_elem()) {
        let plain = CosetEngine::without_cache(z2().clone());
        let a = engine().double_coset(&x).unwrap();
        let b = plain.double_coset(&x).unwrap();
        prop_assert_eq!(&a.key, &b.key);
        prop_assert_eq!(&a.left_reps, &b.left_reps);
    }

    #[test]
    fn convolution_preserves_mass(x in g_elem(), y in g_elem()) {
        // Σ_z c_z L(z) = L(x) L(y): both count pairs of left cosets
        let alg = algebra();
        let p = alg.convolve(&alg.chi(&x).unwrap(), &alg.chi(&y).unwrap()).unwrap();
        let mass = p.terms().fold(Rat::zero(), |acc, (_, t)| acc + &t.coeff * &Rat::int(engine().l_of(&t.rep).unwrap()));
        let expected = engine().l_of(&x).unwrap() * engine().l_of(&y).unwrap();
        prop_assert_eq!(mass, Rat::int(expected));
    }

    #[test]
    fn lattice_sum_and_meet(l1 in hnf_lattice(), l2 in hnf_lattice()) {
        let meet = l1.intersect(&l2);
        let join = l1.sum(&l2);
        prop_assert!(meet.is_sublattice_of(&l1) && meet.is_sublattice_of(&l2));
        prop_assert!(l1.is_sublattice_of(&join) && l2.is_sublattice_of(&join));
        prop_assert_eq!(meet.det() * join.det(), l1.det() * l2.det());
        prop_assert_eq!(l1.intersect(&l1), l1.clone());
        prop_assert_eq!(l1.sum(&l2), l2.sum(&l1));
    }

    #[test]
    fn transform_is_functorial(l in hnf_lattice(), k in -3i64..4, e in 0u32..3) {
        let q1 = Mat2::new(1, k, 0, 1);
        let q2 = Mat2::diag(2i64.pow(e), 1);
        let both = l.transform(&q2).unwrap().transform(&q1).unwrap();
        prop_assert_eq!(both, l.transform(&q1.mul(&q2)).unwrap());
        let (d1, d2) = Lattice::standard().intersect(&l).smith_invariants().unwrap();
        prop_assert!((&d2 % &d1) == BigInt::from(0));
    }

    #[test]
    fn p_adic_decomposition_certifies(
        w in prop::collection::vec(0usize..6, 1..8),
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        let pi = p as i64;
        let gens = [
            Mat2::new(1, 1, 0, 1),
            Mat2::new(1, 0, -1, 1),
            Mat2::new(0, 1, -1, 0),
            Mat2::diag(pi, 1),
            Mat2::diag(1, Rat::new(1, pi)),
            Mat2::new(Rat::one(), Rat::new(1, pi), Rat::zero(), Rat::one()),
        ];
        let g = w.iter().fold(Mat2::identity(), |g, &i| g.mul(&gens[i]));
        let dec = th_decompose_p(&g, p).unwrap();
        prop_assert!(certify_th_p(&g, &dec, p));
        prop_assert_eq!(dec.t.mul(&dec.k), g);
    }
}
