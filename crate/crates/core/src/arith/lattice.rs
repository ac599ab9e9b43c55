//! Full-rank lattices in ℚ² kept in a canonical column Hermite form.
//!
//! Every lattice is stored through its unique basis
//!
//! ```text
//! [[a, 0],
//!  [c, d]]      a > 0, d > 0, 0 ≤ c < d
//! ```
//!
//! whose columns `(a, c)` and `(0, d)` span it over ℤ, so two lattices are
//! equal exactly when their stored bases are identical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{ExtendedGcd, Integer};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::mat2::{Mat2, Vec2};
use super::rat::{common_denominator, Rat};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    a: Rat,
    c: Rat,
    d: Rat,
}

/// Canonical integer data `(a, c, d)` of an integer lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntHermite {
    a: BigInt,
    c: BigInt,
    d: BigInt,
}

fn int_hermite(gens: &[(BigInt, BigInt)]) -> Option<IntHermite> {
    let (mut px, mut py) = (BigInt::zero(), BigInt::zero());
    let mut d = BigInt::zero();
    for (vx, vy) in gens {
        if vx.is_zero() {
            d = d.gcd(vy);
            continue;
        }
        if px.is_zero() {
            px = vx.clone();
            py = vy.clone();
            continue;
        }
        let ExtendedGcd { gcd: g, x: s, y: t } = px.extended_gcd(vx);
        let new_x = &s * &px + &t * vx;
        let new_y = &s * &py + &t * vy;
        let w_y = (vx / &g) * &py - (&px / &g) * vy;
        d = d.gcd(&w_y);
        px = new_x;
        py = new_y;
    }
    if px.is_zero() || d.is_zero() {
        return None;
    }
    if px.is_negative() {
        px = -px;
        py = -py;
    }
    let c = py.mod_floor(&d);
    Some(IntHermite { a: px, c, d })
}

/// Solves `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)`; returns `x mod lcm(m1, m2)`.
fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<BigInt> {
    let g = m1.gcd(m2);
    let diff = r2 - r1;
    if !diff.mod_floor(&g).is_zero() {
        return None;
    }
    let m1g = m1 / &g;
    let m2g = m2 / &g;
    let ExtendedGcd { x: inv, .. } = m1g.extended_gcd(&m2g);
    let k = ((&diff / &g) * inv).mod_floor(&m2g);
    let l = m1 * &m2g;
    Some((r1 + m1 * k).mod_floor(&l))
}

fn int_intersect(l1: &IntHermite, l2: &IntHermite) -> IntHermite {
    let big_a = l1.a.lcm(&l2.a);
    let g = l1.d.gcd(&l2.d);
    let e1 = &l1.c * (&big_a / &l1.a);
    let e2 = &l2.c * (&big_a / &l2.a);
    let delta = (&e1 - &e2).mod_floor(&g);
    let m = &g / g.gcd(&delta);
    let x2 = crt(
        &(&e1 * &m).mod_floor(&l1.d),
        &l1.d,
        &(&e2 * &m).mod_floor(&l2.d),
        &l2.d,
    )
    .expect("compatibility forced by the choice of m");
    let d = l1.d.lcm(&l2.d);
    IntHermite {
        a: big_a * m,
        c: x2.mod_floor(&d),
        d,
    }
}

impl Lattice {
    /// The standard lattice ℤ².
    pub fn standard() -> Lattice {
        Lattice {
            a: Rat::one(),
            c: Rat::zero(),
            d: Rat::one(),
        }
    }

    /// `k·ℤ²` for a nonzero rational `k`.
    pub fn scaled_standard(k: &Rat) -> Result<Lattice> {
        Lattice::from_generators(&[[k.clone(), Rat::zero()], [Rat::zero(), k.clone()]])
    }

    /// Canonical lattice spanned by the columns of `raw_basis`.
    pub fn hnf(raw_basis: &Mat2) -> Result<Lattice> {
        if raw_basis.det().is_zero() {
            return Err(Error::SingularBasis);
        }
        let [u, v] = raw_basis.columns();
        Lattice::from_generators(&[u, v])
    }

    /// Canonical lattice spanned by an arbitrary finite generating set.
    pub fn from_generators(gens: &[Vec2]) -> Result<Lattice> {
        let den = common_denominator(gens.iter().flat_map(|v| v.iter()));
        let scale = Rat::int(den.clone());
        let ints: Vec<(BigInt, BigInt)> = gens
            .iter()
            .map(|v| {
                (
                    (&v[0] * &scale).to_integer().unwrap(),
                    (&v[1] * &scale).to_integer().unwrap(),
                )
            })
            .collect();
        let h = int_hermite(&ints).ok_or(Error::SingularBasis)?;
        Ok(Lattice::from_int(&h, &den))
    }

    fn from_int(h: &IntHermite, den: &BigInt) -> Lattice {
        Lattice {
            a: Rat::new(h.a.clone(), den.clone()),
            c: Rat::new(h.c.clone(), den.clone()),
            d: Rat::new(h.d.clone(), den.clone()),
        }
    }

    fn to_int(&self, den: &BigInt) -> IntHermite {
        let s = Rat::int(den.clone());
        IntHermite {
            a: (&self.a * &s).to_integer().expect("scale clears denominators"),
            c: (&self.c * &s).to_integer().expect("scale clears denominators"),
            d: (&self.d * &s).to_integer().expect("scale clears denominators"),
        }
    }

    /// Smallest positive integer `k` such that `k·L ⊆ ℤ²`.
    pub fn denominator(&self) -> BigInt {
        common_denominator([&self.a, &self.c, &self.d])
    }

    pub fn basis(&self) -> Mat2 {
        Mat2::new(self.a.clone(), Rat::zero(), self.c.clone(), self.d.clone())
    }

    pub fn basis_vectors(&self) -> [Vec2; 2] {
        [
            [self.a.clone(), self.c.clone()],
            [Rat::zero(), self.d.clone()],
        ]
    }

    /// Covolume; always positive.
    pub fn det(&self) -> Rat {
        &self.a * &self.d
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        let k = &v[0] / &self.a;
        if !k.is_integer() {
            return false;
        }
        ((&v[1] - &(&k * &self.c)) / &self.d).is_integer()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// The canonical representative of `v + L`: first coordinate in `[0, a)`,
    /// second in `[0, d)`.
    pub fn reduce(&self, v: &Vec2) -> Vec2 {
        let k = Rat::int((&v[0] / &self.a).floor());
        let x = &v[0] - &(&k * &self.a);
        let y = &v[1] - &(&k * &self.c);
        let j = Rat::int((&y / &self.d).floor());
        let y = &y - &(&j * &self.d);
        [x, y]
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let den = self.denominator().lcm(&other.denominator());
        let h = int_intersect(&self.to_int(&den), &other.to_int(&den));
        Lattice::from_int(&h, &den)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let [u1, v1] = self.basis_vectors();
        let [u2, v2] = other.basis_vectors();
        Lattice::from_generators(&[u1, v1, u2, v2]).expect("sum of full-rank lattices is full rank")
    }

    /// Image `q·L` under an invertible linear map.
    pub fn transform(&self, q: &Mat2) -> Result<Lattice> {
        if q.det().is_zero() {
            return Err(Error::SingularBasis);
        }
        let [u, v] = self.basis_vectors();
        Lattice::from_generators(&[q.apply(&u), q.apply(&v)])
    }

    /// `[self : sub]`, requiring `sub ⊆ self`.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt> {
        if !sub.is_sublattice_of(self) {
            return Err(Error::NotSublattice);
        }
        let ratio = sub.det() / self.det();
        Ok(ratio.to_integer().expect("index of a sublattice is an integer"))
    }

    /// The dual lattice `{y : y·x ∈ ℤ for all x ∈ L}`.
    pub fn dual(&self) -> Lattice {
        let inv_t = self.basis().inverse().expect("basis is nonsingular").transpose();
        Lattice::hnf(&inv_t).expect("dual basis is nonsingular")
    }

    /// Invariant factors `(d1, d2)` of `ℤ²/L`, with `d1 | d2`.
    pub fn smith_invariants(&self) -> Result<(BigInt, BigInt)> {
        if !self.is_sublattice_of(&Lattice::standard()) {
            return Err(Error::NotSublattice);
        }
        let h = self.to_int(&BigInt::one());
        let d1 = h.a.gcd(&h.c).gcd(&h.d);
        let d2 = &h.a * &h.d / &d1;
        Ok((d1, d2))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.basis(), f)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{}", self.basis())
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis().serialize(serializer)
    }
}

pub fn hnf(raw_basis: &Mat2) -> Result<Lattice> {
    Lattice::hnf(raw_basis)
}

pub fn lattice_intersect(l1: &Lattice, l2: &Lattice) -> Lattice {
    l1.intersect(l2)
}

pub fn lattice_sum(l1: &Lattice, l2: &Lattice) -> Lattice {
    l1.sum(l2)
}

pub fn lattice_index(big: &Lattice, small: &Lattice) -> Result<BigInt> {
    big.index_of(small)
}

pub fn transform_lattice(q: &Mat2, l: &Lattice) -> Result<Lattice> {
    l.transform(q)
}

pub fn smith_invariants(l: &Lattice) -> Result<(BigInt, BigInt)> {
    l.smith_invariants()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mat2::vec2;

    fn lat(s: &str) -> Lattice {
        Lattice::hnf(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn identity_is_standard() {
        assert_eq!(lat("[[1,0],[0,1]]"), Lattice::standard());
    }

    #[test]
    fn canonical_form_is_reduced() {
        // columns (2,0) and (1,1)
        let l = lat("[[2,1],[0,1]]");
        assert_eq!(l.det(), 2);
        assert_eq!(l.basis(), "[[1,0],[1,2]]".parse().unwrap());
        assert_eq!(lat("[[3,0],[0,1]]").basis(), Mat2::diag(3, 1));
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(Lattice::hnf(&Mat2::new(1, 2, 2, 4)), Err(Error::SingularBasis));
    }

    #[test]
    fn intersect_and_sum_examples() {
        let a = lat("[[2,0],[0,1]]");
        let b = lat("[[1,0],[0,3]]");
        assert_eq!(a.intersect(&b), lat("[[2,0],[0,3]]"));
        assert_eq!(a.intersect(&a), a);
        let two = lat("[[2,0],[0,2]]");
        let three = lat("[[3,0],[0,3]]");
        assert_eq!(two.sum(&three), Lattice::standard());
        assert_eq!(a.sum(&lat("[[1,0],[0,2]]")), Lattice::standard());
    }

    #[test]
    fn rational_intersection() {
        let half = Lattice::scaled_standard(&Rat::new(1, 2)).unwrap();
        let third = Lattice::scaled_standard(&Rat::new(1, 3)).unwrap();
        assert_eq!(half.intersect(&third), Lattice::standard());
        assert_eq!(half.sum(&third), Lattice::scaled_standard(&Rat::new(1, 6)).unwrap());
    }

    #[test]
    fn index_and_containment() {
        let z2 = Lattice::standard();
        assert_eq!(z2.index_of(&lat("[[5,0],[0,1]]")).unwrap(), BigInt::from(5));
        assert_eq!(z2.index_of(&lat("[[2,1],[0,1]]")).unwrap(), BigInt::from(2));
        assert_eq!(z2.index_of(&lat("[[2,0],[0,2]]")).unwrap(), BigInt::from(4));
        assert_eq!(
            lat("[[2,0],[0,1]]").index_of(&z2),
            Err(Error::NotSublattice)
        );
    }

    #[test]
    fn transform_examples() {
        let z2 = Lattice::standard();
        assert_eq!(z2.transform(&Mat2::diag(2, 1)).unwrap(), lat("[[2,0],[0,1]]"));
        assert_eq!(z2.transform(&Mat2::new(1, 1, 0, 1)).unwrap(), z2);
        assert_eq!(z2.transform(&Mat2::new(1, 1, 1, 1)), Err(Error::SingularBasis));
    }

    #[test]
    fn smith_examples() {
        let one = BigInt::one;
        assert_eq!(lat("[[2,0],[0,2]]").smith_invariants().unwrap(), (BigInt::from(2), BigInt::from(2)));
        assert_eq!(lat("[[7,0],[0,1]]").smith_invariants().unwrap(), (one(), BigInt::from(7)));
        assert_eq!(lat("[[2,1],[0,1]]").smith_invariants().unwrap(), (one(), BigInt::from(2)));
        let half = Lattice::scaled_standard(&Rat::new(1, 2)).unwrap();
        assert_eq!(half.smith_invariants(), Err(Error::NotSublattice));
    }

    #[test]
    fn reduce_is_canonical() {
        let l = lat("[[2,1],[0,1]]");
        let r1 = l.reduce(&vec2(5, 7));
        let r2 = l.reduce(&vec2(5 - 2 * 3 + 1, 7 + 1 - 4));
        assert_eq!(r1, r2);
        assert!(l.contains(&super::super::mat2::vec_sub(&vec2(5, 7), &r1)));
    }

    #[test]
    fn dual_of_scaled() {
        let two = lat("[[2,0],[0,2]]");
        assert_eq!(two.dual(), Lattice::scaled_standard(&Rat::new(1, 2)).unwrap());
    }
}
