//! Factorizations `g = t·k` with `t` lower triangular and `k` of determinant
//! ±1, over `ℤ_(p)` and over `ℤ`, and the finite images of `GL(2, ℤ)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::residue::{MatGroupMod, ResidueRing};
use crate::arith::valuation::{in_z_inv_p, is_prime, is_signed_p_power, mod_inverse, split_p_power, val_p};
use crate::arith::{Mat2, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct THDecomposition {
    pub t: Mat2,
    pub k: Mat2,
    /// Which branch produced the factorization: 0 when `g` already lies in
    /// one of the two factors, otherwise 1 (`b = 0`), 2 (`a = 0`) or 3.
    pub case: u8,
    /// Whether the columns were exchanged with `J = [[0,1],[-1,0]]` first.
    pub swapped: bool,
}

fn j_matrix() -> Mat2 {
    Mat2::new(0, 1, -1, 0)
}

fn is_lower_triangular_t_p(t: &Mat2, p: u64) -> bool {
    t.b.is_zero() && is_signed_p_power(&t.a, p) && is_signed_p_power(&t.d, p) && in_z_inv_p(&t.c, p)
}

fn is_p_integral(x: &Rat, p: u64) -> bool {
    val_p(x, p).map(|v| v.is_nonnegative()).unwrap_or(false)
}

fn is_unimodular_p(k: &Mat2, p: u64) -> bool {
    k.entries().iter().all(|e| is_p_integral(e, p)) && k.det().abs().is_one()
}

/// Writes `x = y + z` with `y ∈ ℤ[1/p]` and `val_p(z) ≥ 0`.
fn split_p_adic(x: &Rat, p: u64) -> (Rat, Rat) {
    let den = x.denom();
    let pb = BigInt::from(p);
    let mut pe = BigInt::one();
    let mut rest = den.clone();
    while (&rest % &pb).is_zero() {
        rest /= &pb;
        pe *= &pb;
    }
    if pe.is_one() {
        return (Rat::zero(), x.clone());
    }
    // x = A / (p^e · w) with gcd(w, p) = 1; take y = B/p^e with B ≡ A·w⁻¹ mod p^e
    let w_inv = mod_inverse(&rest, &pe).expect("w is prime to p");
    let b = (x.numer() * w_inv).mod_floor(&pe);
    let y = Rat::new(b, pe);
    let z = x - &y;
    (y, z)
}

/// Case 1: `g = [[a, 0], [c, d]]` with `ad = p^m`, `a, d` integral.
fn case_lower(g: &Mat2, p: u64) -> (Mat2, Mat2) {
    let (n, u) = split_p_power(&g.a, p).expect("a ≠ 0");
    // ad = p^m forces d = u⁻¹·p^(m-n)
    let (m_minus_n, _) = split_p_power(&g.d, p).expect("d ≠ 0");
    // g = diag(p^n, p^(m-n)) · [[1,0],[x,1]] · diag(u, u⁻¹), x = c·u⁻¹·p^(n-m)
    let scale = Mat2::diag(Rat::one().mul_pow(p, n), Rat::one().mul_pow(p, m_minus_n));
    let x = (&g.c / &u).mul_pow(p, -m_minus_n);
    let (y, z) = split_p_adic(&x, p);
    let t = scale.mul(&Mat2::new(Rat::one(), Rat::zero(), y, Rat::one()));
    let k = Mat2::new(Rat::one(), Rat::zero(), z, Rat::one()).mul(&Mat2::diag(u.clone(), u.recip()));
    (t, k)
}

/// `g` integral with `det g ∈ p^ℕ`, following the three cases.
fn decompose_integral(g: &Mat2, p: u64) -> (Mat2, Mat2, u8, bool) {
    if g.b.is_zero() {
        let (t, k) = case_lower(g, p);
        return (t, k, 1, false);
    }
    if g.a.is_zero() {
        let t = Mat2::new(g.b.clone(), Rat::zero(), g.d.clone(), -&g.c);
        return (t, j_matrix(), 2, false);
    }
    let va = val_p(&g.a, p).unwrap().finite().unwrap();
    let vb = val_p(&g.b, p).unwrap().finite().unwrap();
    let (h, swapped) = if va < vb {
        (g.mul(&j_matrix().inverse().unwrap()), true)
    } else {
        (g.clone(), false)
    };
    // h = [[p^n, 0], [v⁻¹d, p^-n·ad - vc]] · [[p^-n·a, v], [-v⁻¹, 0]]
    let (n, v) = split_p_power(&h.b, p).expect("b ≠ 0");
    let vi = v.recip();
    let first = Mat2::new(
        Rat::one().mul_pow(p, n),
        Rat::zero(),
        &vi * &h.d,
        &(&h.a * &h.d).mul_pow(p, -n) - &(&v * &h.c),
    );
    let second = Mat2::new(h.a.mul_pow(p, -n), v, -vi, Rat::zero());
    let (t, k1) = case_lower(&first, p);
    let mut k = k1.mul(&second);
    if swapped {
        k = k.mul(&j_matrix());
    }
    (t, k, 3, swapped)
}

/// Factors `g ∈ GL(2, ℤ[1/p])` with `det g ∈ ±p^ℤ` as `g = t·k`, `t` lower
/// triangular with diagonal in `±p^ℤ` and entries in `ℤ[1/p]`, `k` with
/// `p`-integral entries and determinant ±1.
pub fn th_decompose_p(g: &Mat2, p: u64) -> Result<THDecomposition> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let det = g.det();
    if det.is_zero() {
        return Err(Error::SingularBasis);
    }
    if !g.entries().iter().all(|e| in_z_inv_p(e, p)) {
        return Err(Error::NotInQ(g.to_string()));
    }
    if !is_signed_p_power(&det, p) {
        return Err(Error::DetNotAllowed(det.to_string()));
    }
    if is_unimodular_p(g, p) {
        return Ok(THDecomposition { t: Mat2::identity(), k: g.clone(), case: 0, swapped: false });
    }
    if is_lower_triangular_t_p(g, p) {
        return Ok(THDecomposition { t: g.clone(), k: Mat2::identity(), case: 0, swapped: false });
    }
    // clear denominators with a central p-power, then make the determinant positive
    let e = g
        .entries()
        .iter()
        .filter_map(|x| val_p(x, p).ok().and_then(|v| v.finite()))
        .map(|v| -v)
        .max()
        .unwrap_or(0)
        .max(0);
    let mut h = g.scale(&Rat::one().mul_pow(p, e));
    let flip = h.det().is_negative();
    let sign = Mat2::diag(1, -1);
    if flip {
        h = h.mul(&sign);
    }
    let (t, mut k, case, swapped) = decompose_integral(&h, p);
    let t = t.scale(&Rat::one().mul_pow(p, -e));
    if flip {
        k = k.mul(&sign);
    }
    Ok(THDecomposition { t, k, case, swapped })
}

/// Whether a factorization satisfies every condition of [`th_decompose_p`].
pub fn certify_th_p(g: &Mat2, dec: &THDecomposition, p: u64) -> bool {
    dec.t.mul(&dec.k) == *g && is_lower_triangular_t_p(&dec.t, p) && is_unimodular_p(&dec.k, p)
}

/// Factors a nonsingular rational `g` as `t·k`, `t` lower triangular and
/// `k ∈ GL(2, ℤ)`, by reducing the first row with an integral column operation.
pub fn th_decompose_global(g: &Mat2) -> Result<THDecomposition> {
    if g.det().is_zero() {
        return Err(Error::SingularBasis);
    }
    if g.is_integral() && g.det().abs().is_one() {
        return Ok(THDecomposition { t: Mat2::identity(), k: g.clone(), case: 0, swapped: false });
    }
    if g.b.is_zero() {
        return Ok(THDecomposition { t: g.clone(), k: Mat2::identity(), case: 0, swapped: false });
    }
    let den = Rat::int(crate::arith::rat::common_denominator([&g.a, &g.b]));
    let a = (&g.a * &den).to_integer().expect("cleared");
    let b = (&g.b * &den).to_integer().expect("cleared");
    let eg = a.extended_gcd(&b);
    // (a, b)·U = (gcd, 0) with U = [[x, -b/g], [y, a/g]], det U = 1
    let u = Mat2::new(
        Rat::int(eg.x),
        Rat::int(-(&b / &eg.gcd)),
        Rat::int(eg.y),
        Rat::int(&a / &eg.gcd),
    );
    let t = g.mul(&u);
    let k = u.inverse()?;
    Ok(THDecomposition { t, k, case: 1, swapped: false })
}

pub fn certify_th_global(g: &Mat2, dec: &THDecomposition) -> bool {
    dec.t.mul(&dec.k) == *g
        && dec.t.b.is_zero()
        && !dec.t.det().is_zero()
        && dec.k.is_integral()
        && dec.k.det().abs().is_one()
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub s: u64,
    pub image_size: usize,
    pub exhaustive_size: u64,
    pub surjective: bool,
    pub closed: bool,
    pub contains_reflection: bool,
}

/// Compares the image of `GL(2, ℤ)` in `M(2, ℤ/s)` (generated from the
/// standard generators) with the set of all matrices of determinant ±1 mod `s`.
pub fn slpm_surjectivity(s: u64, cap: usize) -> Result<SurjectivityReport> {
    let ring = ResidueRing::new(s)?;
    let gens: Vec<_> = [Mat2::new(1, 1, 0, 1), Mat2::new(1, 0, 1, 1), Mat2::diag(1, -1)]
        .iter()
        .map(|g| ring.reduce_mat(g).expect("integral"))
        .collect();
    let group = MatGroupMod::generate(ring, &gens, cap)?;
    let mut exhaustive = 0u64;
    for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                for d in 0..s {
                    if ring.is_plus_minus_one(ring.mat_det(&[a, b, c, d])) {
                        exhaustive += 1;
                    }
                }
            }
        }
    }
    let closed = group
        .elements()
        .iter()
        .all(|x| gens.iter().all(|g| group.position(&ring.mat_mul(x, g)).is_some()));
    let reflection = ring.reduce_mat(&Mat2::diag(1, -1)).expect("integral");
    Ok(SurjectivityReport {
        s,
        image_size: group.len(),
        exhaustive_size: exhaustive,
        surjective: group.len() as u64 == exhaustive,
        closed,
        contains_reflection: group.position(&reflection).is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_adic_examples() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let g = Mat2::diag(pi, 1);
            let dec = th_decompose_p(&g, p).unwrap();
            assert_eq!((dec.t.clone(), dec.k.clone()), (g.clone(), Mat2::identity()));
            let j = Mat2::new(0, 1, -1, 0);
            let dec = th_decompose_p(&j, p).unwrap();
            assert_eq!((dec.t, dec.k), (Mat2::identity(), j));
            let g = Mat2::new(Rat::one(), Rat::new(1, pi), Rat::zero(), Rat::one());
            let dec = th_decompose_p(&g, p).unwrap();
            assert_eq!(dec.t, Mat2::new(Rat::new(1, pi), Rat::zero(), Rat::one(), Rat::int(pi)));
            assert_eq!(dec.k, Mat2::new(pi, 1, -1, 0));
            assert!(certify_th_p(&g, &dec, p));
        }
    }

    #[test]
    fn p_adic_unit_not_plus_minus_one() {
        // b = 3 is a 2-adic unit other than ±1, so the split needs a nonzero z
        let g = Mat2::new(2, 3, 2, 4);
        assert_eq!(g.det(), Rat::int(2));
        let dec = th_decompose_p(&g, 2).unwrap();
        assert!(certify_th_p(&g, &dec, 2), "{dec:?}");
        let g = Mat2::new(Rat::new(3, 4), Rat::new(5, 2), Rat::int(1), Rat::int(6));
        let dec = th_decompose_p(&g, 2).unwrap();
        assert!(certify_th_p(&g, &dec, 2), "{dec:?}");
    }

    #[test]
    fn p_adic_rejections() {
        assert!(matches!(th_decompose_p(&Mat2::diag(3, 1), 2), Err(Error::DetNotAllowed(_))));
        assert!(matches!(th_decompose_p(&Mat2::identity(), 4), Err(Error::NotPrime(4))));
        assert!(matches!(
            th_decompose_p(&Mat2::new(Rat::new(1, 3), 0, 0, 3), 2),
            Err(Error::NotInQ(_))
        ));
    }

    #[test]
    fn global_examples() {
        let g = Mat2::new(2, 1, 1, 1);
        let dec = th_decompose_global(&g).unwrap();
        assert_eq!((dec.t, dec.k), (Mat2::identity(), g));
        let g = Mat2::diag(6, 1);
        let dec = th_decompose_global(&g).unwrap();
        assert_eq!((dec.t, dec.k), (g, Mat2::identity()));
        let g = Mat2::new(Rat::one(), Rat::new(1, 6), Rat::zero(), Rat::one());
        let dec = th_decompose_global(&g).unwrap();
        assert!(certify_th_global(&g, &dec));
    }

    #[test]
    fn surjectivity_small_levels() {
        for (s, n) in [(1u64, 1usize), (2, 6), (3, 48)] {
            let rep = slpm_surjectivity(s, 1 << 20).unwrap();
            assert_eq!(rep.image_size, n);
            assert!(rep.surjective && rep.closed && rep.contains_reflection);
        }
    }
}
