//! Arithmetic modulo `s` and finite matrix groups inside `GL(2, ℤ/s)`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::mat2::Mat2;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    s: u64,
}

impl ResidueRing {
    pub fn new(s: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        Ok(ResidueRing { s })
    }

    pub fn modulus(&self) -> u64 {
        self.s
    }

    pub fn reduce(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.s)).to_u64().unwrap()
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.s as i64) as u64
    }

    /// Reduces an integral rational; `None` for non-integers.
    pub fn reduce_rat(&self, x: &Rat) -> Option<u64> {
        x.to_integer().map(|v| self.reduce(&v))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.s as u128) as u64
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.s as u128) as u64
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.s - x % self.s) % self.s
    }

    /// Reduces an integral matrix entrywise.
    pub fn reduce_mat(&self, m: &Mat2) -> Option<ResMat> {
        Some([
            self.reduce_rat(&m.a)?,
            self.reduce_rat(&m.b)?,
            self.reduce_rat(&m.c)?,
            self.reduce_rat(&m.d)?,
        ])
    }

    pub fn mat_mul(&self, x: &ResMat, y: &ResMat) -> ResMat {
        [
            self.add(self.mul(x[0], y[0]), self.mul(x[1], y[2])),
            self.add(self.mul(x[0], y[1]), self.mul(x[1], y[3])),
            self.add(self.mul(x[2], y[0]), self.mul(x[3], y[2])),
            self.add(self.mul(x[2], y[1]), self.mul(x[3], y[3])),
        ]
    }

    pub fn mat_apply(&self, x: &ResMat, v: &[u64; 2]) -> [u64; 2] {
        [
            self.add(self.mul(x[0], v[0]), self.mul(x[1], v[1])),
            self.add(self.mul(x[2], v[0]), self.mul(x[3], v[1])),
        ]
    }

    pub fn mat_det(&self, x: &ResMat) -> u64 {
        self.add(self.mul(x[0], x[3]), self.neg(self.mul(x[1], x[2])))
    }

    pub fn identity(&self) -> ResMat {
        [1 % self.s, 0, 0, 1 % self.s]
    }

    pub fn is_plus_minus_one(&self, x: u64) -> bool {
        x == 1 % self.s || x == self.neg(1)
    }
}

/// A 2×2 matrix with entries in `[0, s)`.
pub type ResMat = [u64; 4];

pub fn res_mat_to_mat2(m: &ResMat) -> Mat2 {
    Mat2::new(m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64)
}

/// The finite subgroup of `GL(2, ℤ/s)` generated by a list of matrices of
/// determinant ±1, enumerated by breadth-first closure.
#[derive(Clone, Debug)]
pub struct MatGroupMod {
    ring: ResidueRing,
    elements: Vec<ResMat>,
    index: HashMap<ResMat, usize>,
    generators: Vec<usize>,
}

impl MatGroupMod {
    pub fn generate(ring: ResidueRing, gens: &[ResMat], cap: usize) -> Result<Self> {
        let id = ring.identity();
        let mut elements = vec![id];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let x = elements[i];
            for g in gens {
                let y = ring.mat_mul(g, &x);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(y) {
                    if elements.len() >= cap {
                        return Err(Error::SizeCap {
                            size: elements.len() as u128 + 1,
                            cap: cap as u128,
                        });
                    }
                    e.insert(elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(MatGroupMod {
            ring,
            elements,
            index,
            generators,
        })
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ResMat] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ResMat {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn position(&self, m: &ResMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&self.ring.mat_mul(&self.elements[i], &self.elements[j])]
    }

    pub fn inv(&self, i: usize) -> usize {
        let m = &self.elements[i];
        let r = self.ring;
        let det = r.mat_det(m);
        // det = ±1, so det⁻¹ = det
        let adj = [m[3], r.neg(m[1]), r.neg(m[2]), m[0]];
        let inv = [
            r.mul(adj[0], det),
            r.mul(adj[1], det),
            r.mul(adj[2], det),
            r.mul(adj[3], det),
        ];
        self.index[&inv]
    }

    /// Membership mask of the elements satisfying `pred`.
    pub fn select(&self, pred: impl FnMut(&ResMat) -> bool) -> Vec<bool> {
        self.elements.iter().map(pred).collect()
    }

    /// Whether a mask is a subgroup (contains the identity, closed under products).
    pub fn is_subgroup(&self, mask: &[bool]) -> bool {
        if !mask[0] {
            return false;
        }
        // grow the subgroup generated by members one new generator at a time;
        // the mask is a subgroup iff the final closure is exactly the mask
        let mut inside = vec![false; self.len()];
        inside[0] = true;
        let mut span = vec![0usize];
        let mut gens: Vec<usize> = Vec::new();
        for m in 0..self.len() {
            if !mask[m] || inside[m] {
                continue;
            }
            gens.push(m);
            let mut queue: VecDeque<usize> = span.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !inside[y] {
                        if !mask[y] {
                            return false;
                        }
                        inside[y] = true;
                        span.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        true
    }

    /// Whether a subgroup mask is invariant under conjugation by the generators.
    pub fn is_normalized_by_generators(&self, mask: &[bool]) -> bool {
        self.generators.iter().all(|&g| {
            let gi = self.inv(g);
            (0..self.len())
                .filter(|&k| mask[k])
                .all(|k| mask[self.mul(self.mul(g, k), gi)])
        })
    }

    /// Left cosets `xS` of a subgroup: returns the coset id of every element
    /// and the smallest element index in each coset.
    pub fn left_cosets(&self, mask: &[bool]) -> (Vec<usize>, Vec<usize>) {
        let members: Vec<usize> = (0..self.len()).filter(|&i| mask[i]).collect();
        let mut coset_of = vec![usize::MAX; self.len()];
        let mut reps = Vec::new();
        for x in 0..self.len() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &k in &members {
                coset_of[self.mul(x, k)] = id;
            }
        }
        (coset_of, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2z_gens(r: &ResidueRing) -> Vec<ResMat> {
        vec![
            [1, 1, 0, 1],
            [1, 0, 1, 1],
            [1, 0, 0, r.neg(1)],
        ]
        .into_iter()
        .map(|m| m.map(|x| x % r.modulus()))
        .collect()
    }

    #[test]
    fn sl_pm_orders() {
        for (s, order) in [(1u64, 1usize), (2, 6), (3, 48), (4, 96), (5, 240)] {
            let r = ResidueRing::new(s).unwrap();
            let g = MatGroupMod::generate(r, &gl2z_gens(&r), 1 << 20).unwrap();
            assert_eq!(g.len(), order, "s = {s}");
        }
    }

    #[test]
    fn inverse_and_cosets() {
        let r = ResidueRing::new(3).unwrap();
        let g = MatGroupMod::generate(r, &gl2z_gens(&r), 1000).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.mul(i, g.inv(i)), 0);
        }
        let upper = g.select(|m| m[2] == 0);
        assert!(g.is_subgroup(&upper));
        let (ids, reps) = g.left_cosets(&upper);
        assert_eq!(reps.len(), 48 / 12);
        assert!(ids.iter().all(|&i| i < reps.len()));
    }

    #[test]
    fn cap_is_enforced() {
        let r = ResidueRing::new(5).unwrap();
        assert!(matches!(
            MatGroupMod::generate(r, &gl2z_gens(&r), 10),
            Err(Error::SizeCap { .. })
        ));
    }
}
