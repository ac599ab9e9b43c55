use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{Lattice, Mat2};
use crate::error::{Error, Result};
use crate::grouppair::PairDescriptor;

/// A finite union `E = ⊔ tR` of left cosets of `R` in `Q`, stored by
/// canonical coset representatives sorted by their printed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetFamilyE {
    pub coset_reps: Vec<Mat2>,
}

/// A lattice `F ⊇ M`, standing for the union of the `M`-cosets it contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyF {
    pub f_lattice: Lattice,
}

impl FamilyF {
    pub fn new(f_lattice: Lattice) -> Result<Self> {
        if !Lattice::standard().is_sublattice_of(&f_lattice) {
            return Err(Error::FamilyConditionViolated {
                condition: 5,
                detail: format!("{f_lattice} does not contain M"),
            });
        }
        Ok(FamilyF { f_lattice })
    }

    pub fn index_over_m(&self) -> BigInt {
        self.f_lattice
            .index_of(&Lattice::standard())
            .expect("F contains M")
    }
}

impl CosetFamilyE {
    pub fn len(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coset_reps.is_empty()
    }

    pub fn contains_coset(&self, pair: &PairDescriptor, q: &Mat2) -> bool {
        let c = pair.canonical_q(q);
        self.coset_reps.binary_search_by(|t| t.to_string().cmp(&c.to_string())).is_ok()
    }
}

fn sorted_family(cosets: BTreeMap<String, Mat2>) -> CosetFamilyE {
    CosetFamilyE {
        coset_reps: cosets.into_values().collect(),
    }
}

/// Left cosets `tR` covering `R·(seed ∪ {e})·R`, found by closing each
/// `sR` under left multiplication by the generators of `R`.
pub fn make_e(pair: &PairDescriptor, seed: &[Mat2]) -> Result<CosetFamilyE> {
    let bound = pair.bounds().coset_enum_max;
    let mut cosets: BTreeMap<String, Mat2> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for s in std::iter::once(&Mat2::identity()).chain(seed) {
        pair.check_q(s)?;
        let c = pair.canonical_q(s);
        if cosets.insert(c.to_string(), c.clone()).is_none() {
            queue.push_back(c);
        }
    }
    while let Some(t) = queue.pop_front() {
        for r in pair.r_generators() {
            let c = pair.canonical_q(&r.mul(&t));
            let key = c.to_string();
            if !cosets.contains_key(&key) {
                if cosets.len() >= bound {
                    return Err(Error::EnumerationBound { bound });
                }
                cosets.insert(key, c.clone());
                queue.push_back(c);
            }
        }
    }
    Ok(sorted_family(cosets))
}

/// Smallest lattice containing `l` and stable under `R`.
pub fn r_saturate(pair: &PairDescriptor, l: &Lattice) -> Lattice {
    let mut cur = l.clone();
    loop {
        let mut next = cur.clone();
        for r in pair.r_generators() {
            next = next.sum(&cur.transform(r).expect("R is invertible"));
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `F = M + seedF + Σ_{q∈E} q⁻¹M`, closed under `R`.
pub fn make_f(pair: &PairDescriptor, e: &CosetFamilyE, seed_f: Option<&Lattice>) -> Result<FamilyF> {
    let mut l = Lattice::standard();
    if let Some(s) = seed_f {
        l = l.sum(s);
    }
    for t in &e.coset_reps {
        l = l.sum(&Lattice::standard().transform(&t.inverse()?)?);
    }
    FamilyF::new(r_saturate(pair, &l))
}

/// The `R`-orbit of a lattice under the generators of `R`.
fn lattice_orbit(pair: &PairDescriptor, l: &Lattice) -> Result<Vec<Lattice>> {
    let bound = pair.bounds().coset_enum_max;
    let mut seen = BTreeSet::from([l.clone()]);
    let mut queue = VecDeque::from([l.clone()]);
    while let Some(x) = queue.pop_front() {
        for r in pair.r_generators() {
            let y = x.transform(r)?;
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return Err(Error::EnumerationBound { bound });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn violated(condition: u8, detail: String) -> Error {
    Error::FamilyConditionViolated { condition, detail }
}

/// Checks the six membership conditions for `(E, F)` and reports the first
/// one that fails.
pub fn check_family(pair: &PairDescriptor, e: &CosetFamilyE, f: &FamilyF) -> Result<()> {
    let mut keys = BTreeSet::new();
    for t in &e.coset_reps {
        if !pair.in_q(t) {
            return Err(violated(1, format!("{t} is not in Q")));
        }
        if !keys.insert(pair.canonical_q(t).to_string()) {
            return Err(violated(1, format!("coset {t}R is listed twice")));
        }
    }
    if !keys.contains(&pair.canonical_q(&Mat2::identity()).to_string()) {
        return Err(violated(2, "identity coset missing".into()));
    }
    for t in &e.coset_reps {
        for r in pair.r_generators() {
            let c = pair.canonical_q(&r.mul(t));
            if !keys.contains(&c.to_string()) {
                return Err(violated(3, format!("{r}·{t} leaves E")));
            }
        }
    }
    if !Lattice::standard().is_sublattice_of(&f.f_lattice) {
        return Err(violated(5, format!("{} does not contain M", f.f_lattice)));
    }
    for t in &e.coset_reps {
        let base = Lattice::standard().transform(&t.inverse()?)?;
        for l in lattice_orbit(pair, &base)? {
            if !l.is_sublattice_of(&f.f_lattice) {
                return Err(violated(6, format!("q⁻¹Mq = {l} ⊄ F for q ∈ {t}R")));
            }
        }
    }
    Ok(())
}
