use heckepair::arith::{vec2, Mat2, Rat};
use heckepair::cosets::{CosetEngine, HeckeAlgebra};
use heckepair::grouppair::{BaseRing, PairDescriptor};
use serde_json::json;

#[test]
fn square_of_the_p_operator() {
    // T_p² = T_{p²} + (p+1) T_{p,p}: the M-parts match up bijectively, so
    // the classical coefficients carry over
    for p in [2i64, 3, 5] {
        let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(p as u64)).unwrap();
        let alg = HeckeAlgebra::new(pair.clone());
        let t = alg.chi(&pair.q_elem(Mat2::diag(p, 1)).unwrap()).unwrap();
        let sq = alg.convolve(&t, &t).unwrap();
        let expected = alg
            .chi(&pair.q_elem(Mat2::diag(p * p, 1)).unwrap())
            .unwrap()
            .add(&alg.term(&pair.q_elem(Mat2::scalar(p)).unwrap(), &Rat::int(p + 1)).unwrap());
        assert_eq!(sq, expected, "p = {p}");
    }
}

#[test]
fn n_cosets_and_scalars_do_not_commute() {
    // (n, I)(m, 2I) = (n + m, 2I) leaves 2H; (m, 2I)(n, I) = (m + 2n, 2I) stays in it
    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(2)).unwrap();
    let alg = HeckeAlgebra::new(pair.clone());
    let n = vec2(Rat::new(1, 2), 0);
    let a = alg.chi(&pair.n_elem(n.clone()).unwrap()).unwrap();
    let s = alg.chi(&pair.q_elem(Mat2::scalar(2)).unwrap()).unwrap();
    assert_eq!(alg.convolve(&s, &a).unwrap(), s.scale(&Rat::int(3)));
    let mixed = pair.elem(n, Mat2::scalar(2)).unwrap();
    assert_eq!(alg.convolve(&a, &s).unwrap(), alg.chi(&mixed).unwrap());
    assert_eq!(alg.engine().l_of(&mixed).unwrap(), 12);
}

#[test]
fn n_coset_square() {
    // χ_A for A = H(1/2,0)H: its 3 left cosets are the nonzero points of
    // (1/2)ℤ²/ℤ²; sums of two land on 0 three times and on each nonzero point twice
    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(2)).unwrap();
    let alg = HeckeAlgebra::new(pair.clone());
    let n = pair.n_elem(vec2(Rat::new(1, 2), 0)).unwrap();
    let a = alg.chi(&n).unwrap();
    let expected = alg.term(&pair.identity(), &Rat::int(3)).unwrap().add(&alg.term(&n, &Rat::int(2)).unwrap());
    assert_eq!(alg.convolve(&a, &a).unwrap(), expected);
}

#[test]
fn heisenberg_products() {
    let pair = PairDescriptor::heisenberg().unwrap();
    let alg = HeckeAlgebra::new(pair.clone());
    let engine = CosetEngine::new(pair.clone());
    let t = |k: i64| pair.parse_elem(&format!("t=1/{k}")).unwrap();
    // M_q = {0} × kℤ for q = t(1/k), R fixes every q
    for k in [2i64, 3, 6] {
        assert_eq!(engine.l_of(&t(k)).unwrap(), k as u64);
        assert!(engine.delta(&t(k)).unwrap().is_one());
    }
    let f = alg.chi(&t(2)).unwrap();
    let g = alg.chi(&t(3)).unwrap();
    let fg = alg.convolve(&f, &g).unwrap();
    assert_eq!(fg, alg.convolve(&g, &f).unwrap());
    assert_eq!(fg, alg.chi(&pair.parse_elem("t=5/6").unwrap()).unwrap());
}

#[test]
fn involution_and_json() {
    let pair = PairDescriptor::full_gl2(BaseRing::ZInvP(3)).unwrap();
    let alg = HeckeAlgebra::new(pair.clone());
    let v = json!({ "terms": [
        { "rep": "q=[[3,0],[0,1]]", "coeff": "1/2" },
        { "rep": "q=[[1,0],[0,3]]", "coeff": 1 },
        { "rep": "n=(1/3,0)" },
    ]});
    let f = alg.element_from_json(&v).unwrap();
    assert_eq!(f.len(), 2);
    let inv = pair.q_elem(Mat2::diag(Rat::new(1, 3), 1)).unwrap();
    let key = alg.engine().canonical_key(&inv).unwrap();
    // Δ(diag(3,1)) = 3
    assert_eq!(alg.involution(&f).unwrap().coeff(&key), Rat::new(9, 2));
    let back = alg.element_from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
}
