use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::rat::Rat;
use crate::error::{Error, Result};

/// A p-adic valuation; zero has valuation `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn int_val(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.abs();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

/// The p-adic valuation of a rational number.
pub fn val_p(x: &Rat, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let pb = BigInt::from(p);
    Ok(Valuation::Finite(int_val(x.numer(), &pb) - int_val(x.denom(), &pb)))
}

/// Splits `x = unit · p^v`, returning `(v, unit)` for nonzero `x`.
pub fn split_p_power(x: &Rat, p: u64) -> Option<(i64, Rat)> {
    if x.is_zero() {
        return None;
    }
    let v = val_p(x, p).ok()?.finite()?;
    Some((v, x.mul_pow(p, -v)))
}

/// Whether `x ∈ ℤ[1/p]`, i.e. its denominator is a power of `p`.
pub fn in_z_inv_p(x: &Rat, p: u64) -> bool {
    let mut den = x.denom().clone();
    let pb = BigInt::from(p);
    while (&den % &pb).is_zero() {
        den /= &pb;
    }
    den == BigInt::from(1)
}

/// Whether `x ∈ ±p^ℤ`.
pub fn is_signed_p_power(x: &Rat, p: u64) -> bool {
    match split_p_power(x, p) {
        Some((_, u)) => u.abs().is_one(),
        None => false,
    }
}

/// Distinct prime factors of a positive integer by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut k = 2u64;
    loop {
        let kb = BigInt::from(k);
        if &kb * &kb > n {
            break;
        }
        if (&n % &kb).is_zero() {
            out.push(k);
            while (&n % &kb).is_zero() {
                n /= &kb;
            }
        }
        k += 1;
    }
    if n > BigInt::from(1) {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd == BigInt::from(1) {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        for p in [2u64, 3, 5, 7] {
            assert_eq!(val_p(&Rat::new(1, p as i64), p).unwrap(), Valuation::Finite(-1));
            if p != 3 {
                assert_eq!(
                    val_p(&Rat::int((p * p * 3) as i64), p).unwrap(),
                    Valuation::Finite(2)
                );
            }
            assert_eq!(val_p(&Rat::zero(), p).unwrap(), Valuation::Infinity);
        }
        assert_eq!(val_p(&Rat::one(), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn infinity_dominates() {
        assert!(Valuation::Infinity > Valuation::Finite(i64::MAX));
        assert!(Valuation::Infinity.is_nonnegative());
    }

    #[test]
    fn p_power_helpers() {
        assert!(in_z_inv_p(&Rat::new(3, 8), 2));
        assert!(!in_z_inv_p(&Rat::new(1, 6), 2));
        assert!(is_signed_p_power(&Rat::new(-1, 9), 3));
        assert!(!is_signed_p_power(&Rat::int(6), 3));
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
    }
}
