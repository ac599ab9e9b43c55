//! Stabilizer subgroups `M_q`, `R_q`, `R_{n,M}` and their indices.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::descriptor::PairDescriptor;
use crate::arith::mat2::vec_sub;
use crate::arith::residue::{ResMat, ResidueRing};
use crate::arith::rat::common_denominator;
use crate::arith::{Lattice, Mat2, Rat, Vec2};
use crate::error::{Error, Result};

/// A stabilizer `L ⋊ S` inside `H`: the lattice `L ⊆ M` and the image of
/// `S ⊇ R(s)` in `R/R(s)` as a sorted list of residue matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabDescriptor {
    pub m_lattice: Lattice,
    pub level: u64,
    pub members: Vec<ResMat>,
    pub r_index: u64,
}

impl StabDescriptor {
    pub fn contains_r(&self, r: &Mat2) -> bool {
        let ring = ResidueRing::new(self.level).expect("level is positive");
        match ring.reduce_mat(r) {
            Some(m) => self.members.binary_search(&m).is_ok(),
            None => false,
        }
    }
}

fn reduce_int(ring: &ResidueRing, m: &[BigInt; 4]) -> ResMat {
    [ring.reduce(&m[0]), ring.reduce(&m[1]), ring.reduce(&m[2]), ring.reduce(&m[3])]
}

impl PairDescriptor {
    /// `M_q = M ∩ qMq⁻¹`; the action is linear, so `qMq⁻¹ = q·M`.
    pub fn m_q(&self, q: &Mat2) -> Result<Lattice> {
        let m = self.m_lattice();
        Ok(m.intersect(&m.transform(q)?))
    }

    pub fn index_m_q(&self, q: &Mat2) -> Result<BigInt> {
        self.m_lattice().index_of(&self.m_q(q)?)
    }

    /// Whether `r ∈ R_q = R ∩ qRq⁻¹`, i.e. `q⁻¹rq ∈ R`.
    pub fn in_r_q(&self, r: &Mat2, q: &Mat2) -> bool {
        let Ok(qi) = q.inverse() else { return false };
        self.in_r(r) && self.in_r(&qi.mul(r).mul(q))
    }

    /// Whether `r ∈ R_{n,M}`, i.e. `r·n − n ∈ M`.
    pub fn in_r_nm(&self, r: &Mat2, n: &Vec2) -> bool {
        self.in_r(r) && self.in_m(&vec_sub(&r.apply(n), n))
    }

    /// A level `s` with `R(s) ⊆ R_q`: `|det P|` for `q = c·P`, `P` primitive integral.
    pub fn conductor_q(&self, q: &Mat2) -> BigInt {
        let (_, p) = q.primitive_part();
        (&p[0] * &p[3] - &p[1] * &p[2]).abs()
    }

    /// `R_q` as a subgroup of `R/R(s)` at its conductor.
    pub fn stab_q(&self, q: &Mat2) -> Result<StabDescriptor> {
        self.check_q(q)?;
        let s = self.check_conductor(&self.conductor_q(q))?;
        let group = self.r_mod(s)?;
        let ring = group.ring();
        let (_, p) = q.primitive_part();
        let p_mod = reduce_int(&ring, &p);
        let adj = [p[3].clone(), -&p[1], -&p[2], p[0].clone()];
        let adj_mod = reduce_int(&ring, &adj);
        // q⁻¹ r q = P⁻¹ r P is integral exactly when adj(P)·r·P ≡ 0 mod det P.
        let mask = group.select(|r| {
            let x = ring.mat_mul(&ring.mat_mul(&adj_mod, r), &p_mod);
            x.iter().all(|&e| e == 0)
        });
        let mut members: Vec<ResMat> =
            (0..group.len()).filter(|&i| mask[i]).map(|i| *group.element(i)).collect();
        members.sort_unstable();
        let r_index = (group.len() / members.len()) as u64;
        Ok(StabDescriptor {
            m_lattice: self.m_q(q)?,
            level: s,
            members,
            r_index,
        })
    }

    /// `[R : R_q]` by counting `R_q` inside `R/R(s)`.
    pub fn index_r_q(&self, q: &Mat2) -> Result<u64> {
        Ok(self.stab_q(q)?.r_index)
    }

    /// `[R : R_q]` as the size of the orbit of `qR` under left multiplication by `R`.
    pub fn index_r_q_by_orbit(&self, q: &Mat2) -> Result<u64> {
        self.check_q(q)?;
        let start = self.canonical_q(q);
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in self.r_generators() {
                let y = self.canonical_q(&g.mul(&x));
                if seen.insert(y.clone()) {
                    if seen.len() > self.bounds().coset_enum_max {
                        return Err(Error::EnumerationBound {
                            bound: self.bounds().coset_enum_max,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// The level at which `n + M` lives: the common denominator of `n`.
    pub fn level_n(&self, n: &Vec2) -> BigInt {
        common_denominator(n.iter())
    }

    fn residue_point(&self, n: &Vec2) -> Result<(ResidueRing, [u64; 2])> {
        let s = self.check_conductor(&self.level_n(n))?;
        let ring = ResidueRing::new(s)?;
        let scale = Rat::int(s);
        let v = [
            ring.reduce_rat(&(&n[0] * &scale)).expect("level clears denominators"),
            ring.reduce_rat(&(&n[1] * &scale)).expect("level clears denominators"),
        ];
        Ok((ring, v))
    }

    /// `[R : R_{n,M}]`: the size of the `R`-orbit of `n + M` in `N/M`, computed
    /// on `(1/s)ℤ²/ℤ² ≅ (ℤ/s)²`.
    pub fn index_r_nm(&self, n: &Vec2) -> Result<u64> {
        self.check_n(n)?;
        let (ring, v) = self.residue_point(n)?;
        let gens: Vec<ResMat> = self
            .r_generators()
            .iter()
            .map(|g| ring.reduce_mat(g).expect("R generators are integral"))
            .collect();
        let mut seen = HashSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = ring.mat_apply(g, &x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// `R_{n,M}` as a subgroup of `R/R(s)`, `s` the level of `n`.
    pub fn stab_n(&self, n: &Vec2) -> Result<StabDescriptor> {
        self.check_n(n)?;
        let (ring, v) = self.residue_point(n)?;
        let group = self.r_mod(ring.modulus())?;
        let mut members: Vec<ResMat> = group
            .elements()
            .iter()
            .filter(|r| ring.mat_apply(r, &v) == v)
            .copied()
            .collect();
        members.sort_unstable();
        let r_index = (group.len() / members.len()) as u64;
        Ok(StabDescriptor {
            m_lattice: self.m_lattice(),
            level: ring.modulus(),
            members,
            r_index,
        })
    }

    /// `[R : R_{n,M}]` by orbit-stabilizer in `R/R(s)`.
    pub fn index_r_nm_by_stabilizer(&self, n: &Vec2) -> Result<u64> {
        Ok(self.stab_n(n)?.r_index)
    }
}

/// Least common multiple of a list of levels.
pub fn lcm_levels(levels: impl IntoIterator<Item = BigInt>) -> BigInt {
    levels.into_iter().fold(BigInt::one(), |acc, s| acc.lcm(&s))
}
