//! Computations in the Heisenberg family `N = (ℚ/ℤ) × ℚ`, `Q = ℚ` acting by
//! `t·(a, b) = (a + tb, b)`, with `M = {0} × ℤ` and `R = ℤ`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::valuation::{prime_factors, val_p};
use crate::arith::{vec2, Lattice, Mat2, Rat};
use crate::error::{Error, Result};
use crate::grouppair::PairDescriptor;

/// `M ∩ xMx⁻¹` for `x = [[1, 1/n], [0, 1]]`: the subgroup `{0} × kℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeisConjLattice {
    pub n: u64,
    /// Its preimage in `ℚ²` (containing the kernel `ℤ × {0}`).
    pub lattice: Lattice,
    /// `k` with `M ∩ xMx⁻¹ = {0} × kℤ`.
    pub generator: u64,
    pub index: u64,
}

/// Computes `M ∩ xMx⁻¹` twice: as a lattice intersection and by finding the
/// least `b > 0` for which conjugating `(0, b)` by `x⁻¹` lands in `M`.
pub fn heis_conj_lattice(n: u64) -> Result<HeisConjLattice> {
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let pair = PairDescriptor::heisenberg()?;
    let q = Mat2::new(Rat::one(), Rat::new(1, n as i64), Rat::zero(), Rat::one());
    let lattice = pair.m_q(&q)?;
    let index = u64::try_from(pair.index_m_q(&q)?).expect("small index");
    let x = pair.q_elem(q)?;
    let xi = pair.inv(&x)?;
    let generator = (1..=n)
        .find(|&b| {
            let m = pair.n_elem(vec2(0, b as i64)).expect("integral");
            let back = pair.mul(&pair.mul(&xi, &m).unwrap(), &x).unwrap();
            pair.in_h(&back)
        })
        .expect("b = n always works");
    if generator != index {
        return Err(Error::ActionNotWellDefined(format!(
            "lattice index {index} but least generator {generator}"
        )));
    }
    Ok(HeisConjLattice {
        n,
        lattice,
        generator,
        index,
    })
}

/// Finite residue data `z ≡ residue (mod p^k)` for the `p`-component of `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZResidue {
    pub p: u64,
    pub k: u32,
    pub residue: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeisPoint {
    pub z_data: Vec<ZResidue>,
    pub u: Rat,
    pub w: Rat,
}

/// Membership of `(z, u)` in `{z_p = 0 ⟹ u_p ∈ ℤ_p}` from finite data.
///
/// `No` cannot be decided from finitely many residues (it needs `z_p = 0`
/// exactly), so it is never returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaAnswer {
    Yes,
    Unknown,
}

pub fn omega_membership(pt: &HeisPoint) -> Result<OmegaAnswer> {
    for r in &pt.z_data {
        if r.k == 0 {
            return Err(Error::Parse(format!("exponent for p = {} must be positive", r.p)));
        }
    }
    let mut answer = OmegaAnswer::Yes;
    for p in prime_factors(pt.u.denom()) {
        debug_assert!(val_p(&pt.u, p).map(|v| v.finite().unwrap_or(0) < 0).unwrap_or(false));
        let entry = pt
            .z_data
            .iter()
            .filter(|r| r.p == p)
            .max_by_key(|r| r.k)
            .ok_or(Error::InsufficientData(p))?;
        let modulus = BigInt::from(p).pow(entry.k);
        if (BigInt::from(entry.residue) % modulus).is_zero() {
            answer = OmegaAnswer::Unknown;
        }
    }
    Ok(answer)
}

/// The orbit `{(z, w + rz mod s) : r ∈ ℤ/s}` of `R` on `(ℤ/s)²`.
pub fn heis_orbit(z: u64, w: u64, s: u64) -> Result<BTreeSet<(u64, u64)>> {
    if s == 0 {
        return Err(Error::Parse("modulus must be positive".into()));
    }
    let (z, w) = (z % s, w % s);
    Ok((0..s).map(|r| (z, (w + r * z) % s)).collect())
}

/// `s / gcd(z, s)`.
pub fn heis_orbit_size(z: u64, s: u64) -> u64 {
    s / z.gcd(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conj_lattice_examples() {
        assert_eq!(heis_conj_lattice(1).unwrap().generator, 1);
        let six = heis_conj_lattice(6).unwrap();
        assert_eq!(six.generator, 6);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(heis_conj_lattice(p).unwrap().index, p);
        }
    }

    #[test]
    fn omega_examples() {
        let pt = |u: Rat, res: u64| HeisPoint {
            z_data: vec![ZResidue { p: 3, k: 2, residue: res }],
            u,
            w: Rat::zero(),
        };
        assert_eq!(omega_membership(&pt(Rat::int(5), 0)).unwrap(), OmegaAnswer::Yes);
        assert_eq!(omega_membership(&pt(Rat::new(1, 3), 2)).unwrap(), OmegaAnswer::Yes);
        assert_eq!(omega_membership(&pt(Rat::new(1, 3), 0)).unwrap(), OmegaAnswer::Unknown);
        assert_eq!(
            omega_membership(&pt(Rat::new(1, 6), 2)),
            Err(Error::InsufficientData(2))
        );
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(heis_orbit(0, 4, 6).unwrap(), BTreeSet::from([(0, 4)]));
        assert_eq!(
            heis_orbit(2, 1, 6).unwrap(),
            BTreeSet::from([(2, 1), (2, 3), (2, 5)])
        );
        assert_eq!(heis_orbit(5, 0, 6).unwrap().len(), 6);
    }
}
