//! Finite quotients `(M/M_E) ⋊ (R/R^E_F)` of `H` and the reduction maps
//! between them.

mod family;
mod maps;
mod stage;

use num_integer::Integer;
use serde_json::{json, Value};

pub use family::{check_family, make_e, make_f, r_saturate, CosetFamilyE, FamilyF};
pub use maps::{
    compare_quotient, connecting_map, m_index_growth, triangle_commutes, verify_stage,
    ConnectingMap, QuotientComparison, StageChecks,
};
pub use stage::{
    build_stage, build_stage_at, compute_m_e, compute_r_ef, r_lifts, MQuotient, RSubgroup,
    TowerStage,
};

use crate::arith::{Lattice, Mat2};
use crate::error::Result;
use crate::grouppair::PairDescriptor;

/// Nested stages built from growing prefixes of a seed list, all at one
/// common modulus, with the reduction maps between every comparable pair.
#[derive(Clone, Debug)]
pub struct Tower {
    pub stages: Vec<TowerStage>,
    /// `(fine, coarse, map)` for every `fine > coarse`.
    pub maps: Vec<(usize, usize, ConnectingMap)>,
}

impl Tower {
    pub fn map(&self, fine: usize, coarse: usize) -> Option<&ConnectingMap> {
        self.maps
            .iter()
            .find(|(f, c, _)| *f == fine && *c == coarse)
            .map(|(_, _, m)| m)
    }

    /// Every triangle `i > j > k` as `((i, j, k), commutes)`.
    pub fn triangles(&self) -> Vec<((usize, usize, usize), bool)> {
        let n = self.stages.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..i {
                for k in 0..j {
                    let ok = triangle_commutes(
                        self.map(i, j).expect("built"),
                        self.map(j, k).expect("built"),
                        self.map(i, k).expect("built"),
                    );
                    out.push(((i, j, k), ok));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "stages": self.stages.iter().map(TowerStage::summary).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(|(f, c, m)| json!({
                "fine": f, "coarse": c, "map": m, "verdict": m.verdict(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Stage `k` uses `E` generated by the first `k` seeds (stage 0 is the base
/// stage `E = R`) and the matching `F` from [`make_f`], enlarged by `seed_f`.
pub fn build_tower(pair: &PairDescriptor, seeds: &[Mat2], seed_f: Option<&Lattice>) -> Result<Tower> {
    let mut families = Vec::new();
    for k in 0..=seeds.len() {
        let e = make_e(pair, &seeds[..k])?;
        let f = make_f(pair, &e, seed_f)?;
        families.push((e, f));
    }
    let mut modulus = 1u64;
    for (e, f) in &families {
        modulus = modulus.lcm(&build_stage(pair, e, f)?.modulus());
    }
    let stages = families
        .iter()
        .map(|(e, f)| build_stage_at(pair, e, f, modulus))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::new();
    for i in 0..stages.len() {
        for j in 0..i {
            maps.push((i, j, connecting_map(&stages[i], &stages[j])?));
        }
    }
    Ok(Tower { stages, maps })
}
