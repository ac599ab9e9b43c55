use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::residue::res_mat_to_mat2;
use crate::arith::mat2::{vec_is_integral, vec_sub};
use crate::arith::{Lattice, MatGroupMod, Mat2, ResMat};
use crate::error::{Error, Result};
use crate::grouppair::PairDescriptor;

use super::family::{check_family, r_saturate, CosetFamilyE, FamilyF};

/// `M_E = M ∩ ⋂_{t} tM` over the coset representatives of `E`.
pub fn compute_m_e(e: &CosetFamilyE) -> Result<Lattice> {
    let mut l = Lattice::standard();
    for t in &e.coset_reps {
        l = l.intersect(&Lattice::standard().transform(t)?);
    }
    Ok(l)
}

/// `ℤ²/L` for an integral lattice with basis `(a, c), (0, d)`; residues are
/// `(x, y)` with `0 ≤ x < a`, `0 ≤ y < d`, encoded as `x·d + y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MQuotient {
    pub a: i64,
    pub c: i64,
    pub d: i64,
}

impl MQuotient {
    pub fn new(l: &Lattice) -> Result<Self> {
        if !l.is_sublattice_of(&Lattice::standard()) {
            return Err(Error::NotSublattice);
        }
        let [[a, c], [_, d]] = l.basis_vectors();
        let int = |x: &crate::arith::Rat| -> Result<i64> {
            x.to_i64().ok_or(Error::SizeCap {
                size: u128::MAX,
                cap: i64::MAX as u128,
            })
        };
        Ok(MQuotient {
            a: int(&a)?,
            c: int(&c)?,
            d: int(&d)?,
        })
    }

    pub fn len(&self) -> usize {
        (self.a * self.d) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest `e > 0` with `eℤ² ⊆ L`.
    pub fn exponent(&self) -> u64 {
        let (_, d2) = self.invariant_factors();
        d2
    }

    pub fn invariant_factors(&self) -> (u64, u64) {
        let d1 = self.a.gcd(&self.c).gcd(&self.d);
        ((d1) as u64, (self.a * self.d / d1) as u64)
    }

    pub fn reduce(&self, x: i128, y: i128) -> (i64, i64) {
        let (a, c, d) = (self.a as i128, self.c as i128, self.d as i128);
        let k = x.div_euclid(a);
        let x = x - k * a;
        let y = (y - k * c).rem_euclid(d);
        (x as i64, y as i64)
    }

    pub fn encode(&self, x: i128, y: i128) -> usize {
        let (x, y) = self.reduce(x, y);
        (x * self.d + y) as usize
    }

    pub fn decode(&self, i: usize) -> (i64, i64) {
        let i = i as i64;
        (i / self.d, i % self.d)
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (x1, y1) = self.decode(i);
        let (x2, y2) = self.decode(j);
        self.encode((x1 + x2) as i128, (y1 + y2) as i128)
    }

    /// `r·m` for an integer matrix given modulo a multiple of the exponent.
    pub fn act(&self, r: &ResMat, i: usize) -> usize {
        let (x, y) = self.decode(i);
        let (x, y) = (x as i128, y as i128);
        let r = r.map(|v| v as i128);
        self.encode(r[0] * x + r[1] * y, r[2] * x + r[3] * y)
    }
}

/// `R^E_F` inside `R/R(S)`, with its left cosets.
#[derive(Clone, Debug)]
pub struct RSubgroup {
    /// A modulus `s` with `R(s) ⊆ R^E_F`, so membership is read off `R/R(s)`.
    pub conductor: u64,
    pub modulus: u64,
    pub group: Arc<MatGroupMod>,
    pub mask: Vec<bool>,
    pub coset_of: Vec<usize>,
    pub coset_reps: Vec<usize>,
}

impl RSubgroup {
    pub fn size(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn members(&self) -> impl Iterator<Item = &ResMat> {
        self.group
            .elements()
            .iter()
            .zip(&self.mask)
            .filter(|(_, m)| **m)
            .map(|(r, _)| r)
    }
}

/// A sufficient modulus `s` with `R(s) ⊆ R^E_F`: `s·t⁻¹Xt·v` is integral for
/// every integral `X`, every coset representative `t` and every basis vector
/// `v` of `F`.
fn r_ef_conductor(e: &CosetFamilyE, f: &Lattice) -> Result<BigInt> {
    let basis = f.basis();
    let mut s = BigInt::one();
    for t in &e.coset_reps {
        let ti = t.inverse()?;
        s = s.lcm(&(ti.denominator() * t.mul(&basis).denominator()));
    }
    Ok(s)
}

/// `R^E_F = {r ∈ R : (t⁻¹rt − I)v ∈ ℤ² for all t ∈ E, v ∈ F}`, computed in
/// `R/R(S)` with `S` a multiple of the conductor and of `extra_modulus`.
///
/// The intersection over each whole coset `tR` reduces to the representative
/// `t` once `F` is replaced by its `R`-saturation.
pub fn compute_r_ef(
    pair: &PairDescriptor,
    e: &CosetFamilyE,
    f: &FamilyF,
    extra_modulus: u64,
) -> Result<RSubgroup> {
    let f_sat = r_saturate(pair, &f.f_lattice);
    let conductor = pair.check_conductor(&r_ef_conductor(e, &f_sat)?)?;
    let modulus = pair.check_conductor(&BigInt::from(conductor).lcm(&BigInt::from(extra_modulus)))?;
    let group = pair.r_mod(modulus)?;
    let tests: Vec<(Mat2, Vec<_>)> = e
        .coset_reps
        .iter()
        .map(|t| {
            let ti = t.inverse().expect("Q is invertible");
            let tv: Vec<_> = f_sat
                .basis_vectors()
                .iter()
                .map(|v| (t.apply(v), v.clone()))
                .collect();
            (ti, tv)
        })
        .collect();
    let mask = group.select(|r| {
        let r = res_mat_to_mat2(r);
        tests.iter().all(|(ti, tv)| {
            tv.iter()
                .all(|(w, v)| vec_is_integral(&vec_sub(&ti.apply(&r.apply(w)), v)))
        })
    });
    if !group.is_subgroup(&mask) {
        return Err(Error::ActionNotWellDefined(
            "the stabilizer condition does not cut out a subgroup".into(),
        ));
    }
    let (coset_of, coset_reps) = group.left_cosets(&mask);
    Ok(RSubgroup {
        conductor,
        modulus,
        group,
        mask,
        coset_of,
        coset_reps,
    })
}

/// One finite quotient `(M/M_E) ⋊ (R/R^E_F)` of `H`.
#[derive(Clone, Debug)]
pub struct TowerStage {
    pub e: CosetFamilyE,
    pub f: FamilyF,
    pub m_e: Lattice,
    pub quot_m: MQuotient,
    pub r_ef: RSubgroup,
}

impl TowerStage {
    pub fn modulus(&self) -> u64 {
        self.r_ef.modulus
    }

    pub fn index_m(&self) -> usize {
        self.quot_m.len()
    }

    pub fn index_r(&self) -> usize {
        self.r_ef.index()
    }

    pub fn order(&self) -> usize {
        self.index_m() * self.index_r()
    }

    pub fn encode(&self, m: usize, r_coset: usize) -> usize {
        m * self.index_r() + r_coset
    }

    pub fn decode(&self, x: usize) -> (usize, usize) {
        (x / self.index_r(), x % self.index_r())
    }

    fn coset_rep(&self, c: usize) -> &ResMat {
        self.r_ef.group.element(self.r_ef.coset_reps[c])
    }

    /// `(m₁, r₁)(m₂, r₂) = (m₁ + r₁·m₂, r₁r₂)`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (m1, c1) = self.decode(x);
        let (m2, c2) = self.decode(y);
        let m = self.quot_m.add(m1, self.quot_m.act(self.coset_rep(c1), m2));
        let g = &self.r_ef.group;
        let r = g.mul(self.r_ef.coset_reps[c1], self.r_ef.coset_reps[c2]);
        self.encode(m, self.r_ef.coset_of[r])
    }

    /// The class of `(m, r)` for integral `m` and `r ∈ R` given mod `S`.
    pub fn class_of(&self, m: (i128, i128), r: &ResMat) -> Option<usize> {
        let pos = self.r_ef.group.position(r)?;
        Some(self.encode(self.quot_m.encode(m.0, m.1), self.r_ef.coset_of[pos]))
    }

    /// Images of the generators of `M` and `R`.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = vec![
            self.encode(self.quot_m.encode(1, 0), self.r_ef.coset_of[0]),
            self.encode(self.quot_m.encode(0, 1), self.r_ef.coset_of[0]),
        ];
        for &g in self.r_ef.group.generators() {
            gens.push(self.encode(0, self.r_ef.coset_of[g]));
        }
        gens
    }

    pub fn summary(&self) -> Value {
        let (d1, d2) = self.quot_m.invariant_factors();
        json!({
            "E": self.e.coset_reps.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "F": self.f.f_lattice.to_string(),
            "M_E": self.m_e.to_string(),
            "M_quotient_invariants": [d1, d2],
            "index_M": self.index_m(),
            "modulus": self.modulus(),
            "conductor": self.r_ef.conductor,
            "index_R": self.index_r(),
            "semidirect_order": self.order(),
        })
    }
}

/// Assembles the stage for `(E, F)` after checking the family conditions
/// and that `R^E_F` acts trivially on `M/M_E`.
pub fn build_stage(pair: &PairDescriptor, e: &CosetFamilyE, f: &FamilyF) -> Result<TowerStage> {
    build_stage_at(pair, e, f, 1)
}

/// As [`build_stage`], working modulo a multiple of `extra_modulus` so that
/// stages built at a common modulus can be compared directly.
pub fn build_stage_at(
    pair: &PairDescriptor,
    e: &CosetFamilyE,
    f: &FamilyF,
    extra_modulus: u64,
) -> Result<TowerStage> {
    check_family(pair, e, f)?;
    let m_e = compute_m_e(e)?;
    let quot_m = MQuotient::new(&m_e)?;
    let extra = quot_m.exponent().lcm(&extra_modulus);
    let r_ef = compute_r_ef(pair, e, f, extra)?;
    let cap = pair.bounds().stage_order_max;
    let order = quot_m.len() as u128 * r_ef.index() as u128;
    if order > cap as u128 {
        return Err(Error::SizeCap {
            size: order,
            cap: cap as u128,
        });
    }
    let stage = TowerStage {
        e: e.clone(),
        f: f.clone(),
        m_e,
        quot_m,
        r_ef,
    };
    if let Some(bad) = trivial_action_failure(&stage) {
        return Err(Error::ActionNotWellDefined(bad));
    }
    Ok(stage)
}

/// The first `r ∈ R^E_F` and generator `m` of `M` with `rm − m ∉ M_E`.
pub(crate) fn trivial_action_failure(stage: &TowerStage) -> Option<String> {
    let q = &stage.quot_m;
    let gens = [q.encode(1, 0), q.encode(0, 1)];
    for r in stage.r_ef.members() {
        for &m in &gens {
            if q.act(r, m) != m {
                return Some(format!("{r:?} moves {:?} modulo M_E", q.decode(m)));
            }
        }
    }
    None
}

/// Integral lifts in `R` of every element of `R/R(S)`, found by a
/// breadth-first search over words in the generators.
pub fn r_lifts(pair: &PairDescriptor, group: &MatGroupMod) -> Vec<Mat2> {
    let ring = group.ring();
    let mut lifts: HashMap<usize, Mat2> = HashMap::from([(0, Mat2::identity())]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let x = lifts[&i].clone();
        for g in pair.r_generators() {
            let y = g.mul(&x);
            let pos = group
                .position(&ring.reduce_mat(&y).expect("R is integral"))
                .expect("closed under generators");
            lifts.entry(pos).or_insert_with(|| {
                queue.push_back(pos);
                y
            });
        }
    }
    (0..group.len()).map(|i| lifts.remove(&i).expect("every element is reached")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;
    use crate::grouppair::BaseRing;
    use crate::tower::family::{make_e, make_f};

    fn pair() -> PairDescriptor {
        PairDescriptor::full_gl2(BaseRing::ZInvP(2)).unwrap()
    }

    #[test]
    fn trivial_stage() {
        let p = pair();
        let e = make_e(&p, &[]).unwrap();
        let f = make_f(&p, &e, None).unwrap();
        let st = build_stage(&p, &e, &f).unwrap();
        assert_eq!(st.m_e, Lattice::standard());
        assert_eq!(st.order(), 1);
        assert_eq!(st.modulus(), 1);
    }

    #[test]
    fn half_lattice_gives_level_two() {
        let p = pair();
        let e = make_e(&p, &[]).unwrap();
        let f = FamilyF::new(Lattice::scaled_standard(&Rat::new(1, 2)).unwrap()).unwrap();
        let r = compute_r_ef(&p, &e, &f, 1).unwrap();
        assert_eq!(r.modulus, 2);
        // only the identity class of R/R(2) survives
        assert_eq!(r.size(), 1);
        assert_eq!(r.index(), 6);
    }

    #[test]
    fn diag_2_1_stage() {
        let p = pair();
        let e = make_e(&p, &[Mat2::diag(2, 1)]).unwrap();
        let f = make_f(&p, &e, None).unwrap();
        let st = build_stage(&p, &e, &f).unwrap();
        assert_eq!(st.m_e, Lattice::scaled_standard(&Rat::int(2)).unwrap());
        assert_eq!(st.index_m(), 4);
        assert_eq!(st.quot_m.invariant_factors(), (2, 2));
        assert_eq!(st.order(), 4 * st.index_r());
    }

    #[test]
    fn lifts_reduce_correctly() {
        let p = pair();
        let g = p.r_mod(4).unwrap();
        let lifts = r_lifts(&p, &g);
        for (i, l) in lifts.iter().enumerate() {
            assert!(p.in_r(l));
            assert_eq!(g.ring().reduce_mat(l).unwrap(), *g.element(i));
        }
    }
}
