//! Units of `ℤ[√d]` and of its reductions `ℤ/s[√d]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::quad::{check_discriminant, quad_pow_mod, QuadInt};
use crate::error::{Error, Result};

/// The smallest unit `> 1` of `ℤ[√d]`, read off the continued fraction of `√d`.
pub fn fundamental_unit(d: i64) -> Result<QuadInt> {
    if d <= 1 {
        return Err(Error::BadDiscriminant {
            d,
            reason: "d must be greater than 1",
        });
    }
    check_discriminant(d)?;
    let db = BigInt::from(d);
    let a0 = db.sqrt();
    // √d = [a0; a1, a2, ...] via (m + √d)/q recurrences
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut qq) = (BigInt::zero(), BigInt::one());
    loop {
        let norm = &p * &p - &db * &qq * &qq;
        if norm.is_one() || norm == -BigInt::one() {
            return Ok(QuadInt::new_unchecked(p, qq, d));
        }
        m = &a * &q - &m;
        q = (&db - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut qq, q_next);
    }
}

/// The multiplicative order of the unit `r0` in `ℤ/s[√d]`.
pub fn unit_order_mod(r0: &QuadInt, s: u64) -> Result<u64> {
    if !r0.is_unit() {
        return Err(Error::Parse(format!("{r0} is not a unit")));
    }
    if s == 0 {
        return Err(Error::Parse("modulus must be positive".into()));
    }
    let one = QuadInt::one(r0.d).reduce_mod(s);
    let base = r0.reduce_mod(s);
    let mut x = base.clone();
    let mut k = 1u64;
    while x != one {
        x = x.mul_mod(&base, s);
        k += 1;
    }
    Ok(k)
}

/// Units of `ℤ/s[√d]` against the image of the global units `±r0^ℤ`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadUnitData {
    pub d: i64,
    pub r0: QuadInt,
    pub s: u64,
    pub n_s: u64,
    pub image_size: usize,
    pub full_size: usize,
    pub proper: bool,
    /// The smallest unit `(m, n)` outside the image, when there is one.
    pub witness: Option<(u64, u64)>,
    #[serde(skip)]
    pub unit_image: BTreeSet<(u64, u64)>,
    #[serde(skip)]
    pub full_units: BTreeSet<(u64, u64)>,
}

impl QuadUnitData {
    pub fn in_image(&self, m: u64, n: u64) -> bool {
        self.unit_image.contains(&(m % self.s, n % self.s))
    }
}

fn pair(x: &QuadInt) -> (u64, u64) {
    (
        u64::try_from(&x.m).expect("reduced"),
        u64::try_from(&x.n).expect("reduced"),
    )
}

/// Enumerates the full unit group of `ℤ/s[√d]` and the subgroup generated
/// by `-1` and the fundamental unit.
pub fn unit_image_gap(d: i64, s: u64) -> Result<QuadUnitData> {
    if s < 2 {
        return Err(Error::Parse("modulus must be at least 2".into()));
    }
    let r0 = fundamental_unit(d)?;
    let n_s = unit_order_mod(&r0, s)?;
    let sb = BigInt::from(s);
    let db = BigInt::from(d);
    let mut full_units = BTreeSet::new();
    for m in 0..s {
        for n in 0..s {
            let norm = (BigInt::from(m * m) - &db * BigInt::from(n * n)).mod_floor(&sb);
            if norm.gcd(&sb).is_one() {
                full_units.insert((m, n));
            }
        }
    }
    let mut unit_image = BTreeSet::new();
    for k in 0..n_s {
        let x = quad_pow_mod(&r0, k, s);
        unit_image.insert(pair(&x));
        unit_image.insert(pair(&x.neg().reduce_mod(s)));
    }
    let witness = full_units.iter().find(|u| !unit_image.contains(u)).copied();
    Ok(QuadUnitData {
        d,
        r0,
        s,
        n_s,
        image_size: unit_image.len(),
        full_size: full_units.len(),
        proper: witness.is_some(),
        witness,
        unit_image,
        full_units,
    })
}
