use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::mat2::Mat2;
use super::rat::Rat;
use crate::error::{Error, Result};

pub fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Checks that `ℤ[√d]` is the ring this crate supports: `d` square-free,
/// `d ≠ 1`, and `d ≢ 1 (mod 4)`.
pub fn check_discriminant(d: i64) -> Result<()> {
    if d == 1 || d == 0 {
        return Err(Error::BadDiscriminant { d, reason: "d must not be 0 or 1" });
    }
    if !is_square_free(d) {
        return Err(Error::BadDiscriminant { d, reason: "d is not square-free" });
    }
    if d.rem_euclid(4) == 1 {
        return Err(Error::BadDiscriminant {
            d,
            reason: "d ≡ 1 mod 4: the integers of ℚ(√d) are ℤ[(1+√d)/2], not ℤ[√d]",
        });
    }
    Ok(())
}

/// `m + n√d` in `ℤ[√d]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadInt {
    #[serde(serialize_with = "ser_big")]
    pub m: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub n: BigInt,
    pub d: i64,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl QuadInt {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>, d: i64) -> Result<Self> {
        check_discriminant(d)?;
        Ok(QuadInt { m: m.into(), n: n.into(), d })
    }

    pub(crate) fn new_unchecked(m: BigInt, n: BigInt, d: i64) -> Self {
        QuadInt { m, n, d }
    }

    pub fn one(d: i64) -> Self {
        QuadInt::new_unchecked(BigInt::one(), BigInt::zero(), d)
    }

    pub fn norm(&self) -> BigInt {
        &self.m * &self.m - BigInt::from(self.d) * &self.n * &self.n
    }

    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n == BigInt::one() || n == -BigInt::one()
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        debug_assert_eq!(self.d, o.d);
        let d = BigInt::from(self.d);
        QuadInt::new_unchecked(
            &self.m * &o.m + d * &self.n * &o.n,
            &self.m * &o.n + &self.n * &o.m,
            self.d,
        )
    }

    pub fn neg(&self) -> QuadInt {
        QuadInt::new_unchecked(-&self.m, -&self.n, self.d)
    }

    pub fn reduce_mod(&self, s: u64) -> QuadInt {
        let sb = BigInt::from(s);
        QuadInt::new_unchecked(self.m.mod_floor(&sb), self.n.mod_floor(&sb), self.d)
    }

    pub fn mul_mod(&self, o: &QuadInt, s: u64) -> QuadInt {
        self.mul(o).reduce_mod(s)
    }

    /// The multiplication-by-`self` matrix on the basis `(1, √d)`: `[[m, dn], [n, m]]`.
    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(
            Rat::int(self.m.clone()),
            Rat::int(BigInt::from(self.d) * &self.n),
            Rat::int(self.n.clone()),
            Rat::int(self.m.clone()),
        )
    }

    /// Reads back `[[a, db], [b, a]]` as `a + b√d` when the entries are integers.
    pub fn from_matrix(q: &Mat2, d: i64) -> Option<QuadInt> {
        if q.a != q.d || q.b != &q.c * &Rat::int(d) {
            return None;
        }
        Some(QuadInt::new_unchecked(q.a.to_integer()?, q.c.to_integer()?, d))
    }
}

/// `r^k` with both coordinates reduced into `[0, s)`.
pub fn quad_pow_mod(r: &QuadInt, k: u64, s: u64) -> QuadInt {
    let mut result = QuadInt::one(r.d).reduce_mod(s);
    let mut base = r.reduce_mod(s);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_mod(&base, s);
        }
        base = base.mul_mod(&base, s);
        e >>= 1;
    }
    result
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}√{}", self.m, self.n, self.d)
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
