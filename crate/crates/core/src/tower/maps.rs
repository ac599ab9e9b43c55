use std::collections::HashSet;

use serde::Serialize;

use crate::arith::residue::ResidueRing;
use crate::arith::{vec2, Lattice};
use crate::error::{Error, Result};
use crate::grouppair::PairDescriptor;
use crate::report::Verdict;

use super::stage::{r_lifts, trivial_action_failure, TowerStage};

/// The reduction `(m mod M_fine, r mod R_fine) ↦ (m mod M_coarse, r mod R_coarse)`
/// as a table on the elements of the finer stage.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectingMap {
    #[serde(skip)]
    pub table: Vec<usize>,
    pub fine_order: usize,
    pub coarse_order: usize,
    pub image_size: usize,
    pub kernel_size: usize,
    pub homomorphism: bool,
    pub surjective: bool,
}

impl ConnectingMap {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(
            self.homomorphism && self.surjective && self.kernel_size * self.coarse_order == self.fine_order,
        )
    }
}

pub fn connecting_map(fine: &TowerStage, coarse: &TowerStage) -> Result<ConnectingMap> {
    if !fine.m_e.is_sublattice_of(&coarse.m_e) {
        return Err(Error::NotComparable(format!(
            "M_E {} is not inside {}",
            fine.m_e, coarse.m_e
        )));
    }
    if !fine.modulus().is_multiple_of(coarse.modulus()) {
        return Err(Error::NotComparable(format!(
            "modulus {} is not a multiple of {}",
            fine.modulus(),
            coarse.modulus()
        )));
    }
    let ring = ResidueRing::new(coarse.modulus())?;
    let reduce = |r: &[u64; 4]| r.map(|v| v % ring.modulus());
    let fg = &fine.r_ef.group;
    let cg = &coarse.r_ef.group;
    for r in fine.r_ef.members() {
        let pos = cg.position(&reduce(r)).ok_or_else(|| {
            Error::NotComparable(format!("{r:?} has no image in the coarse R quotient"))
        })?;
        if !coarse.r_ef.mask[pos] {
            return Err(Error::NotComparable(format!(
                "R^E_F of the finer stage is not inside the coarser one at {r:?}"
            )));
        }
    }
    let r_map: Vec<usize> = fine
        .r_ef
        .coset_reps
        .iter()
        .map(|&i| coarse.r_ef.coset_of[cg.position(&reduce(fg.element(i))).expect("checked")])
        .collect();
    let table: Vec<usize> = (0..fine.order())
        .map(|x| {
            let (m, c) = fine.decode(x);
            let (mx, my) = fine.quot_m.decode(m);
            coarse.encode(coarse.quot_m.encode(mx as i128, my as i128), r_map[c])
        })
        .collect();
    let homomorphism = fine.generators().iter().all(|&g| {
        (0..fine.order()).all(|x| table[fine.mul(g, x)] == coarse.mul(table[g], table[x]))
    }) && table[fine.encode(0, fine.r_ef.coset_of[0])] == coarse.encode(0, coarse.r_ef.coset_of[0]);
    let image: HashSet<usize> = table.iter().copied().collect();
    let identity = coarse.encode(0, coarse.r_ef.coset_of[0]);
    let kernel_size = table.iter().filter(|&&y| y == identity).count();
    Ok(ConnectingMap {
        fine_order: fine.order(),
        coarse_order: coarse.order(),
        image_size: image.len(),
        surjective: image.len() == coarse.order(),
        kernel_size,
        homomorphism,
        table,
    })
}

/// Whether `bc ∘ ab = ac` on every element.
pub fn triangle_commutes(ab: &ConnectingMap, bc: &ConnectingMap, ac: &ConnectingMap) -> bool {
    ab.table.len() == ac.table.len() && ab.table.iter().zip(&ac.table).all(|(&b, &c)| bc.table[b] == c)
}

/// Structural checks on one stage.
#[derive(Clone, Debug, Serialize)]
pub struct StageChecks {
    /// `R^E_F` is a subgroup of `R/R(S)` normalized by the generators of `R`.
    pub r_ef_normal: bool,
    /// `rM_E = M_E` for each generator `r` of `R`, and `M_E ⊆ M`.
    pub m_e_r_stable: bool,
    /// `(r − I)m ∈ M_E` for all `r ∈ R^E_F` and generators `m` of `M`.
    pub r_ef_acts_trivially: bool,
    /// Every class `≡ I` modulo the conductor lies in `R^E_F`.
    pub congruence_inside: bool,
    /// `|semidirect| = [M:M_E][R:R^E_F]` with `|R/R(S)| = |R^E_F|·[R:R^E_F]`.
    pub order_formula: bool,
    pub verdict: Verdict,
}

pub fn verify_stage(pair: &PairDescriptor, stage: &TowerStage) -> Result<StageChecks> {
    let r = &stage.r_ef;
    let r_ef_normal = r.group.is_subgroup(&r.mask) && r.group.is_normalized_by_generators(&r.mask);
    let mut m_e_r_stable = stage.m_e.is_sublattice_of(&Lattice::standard());
    for g in pair.r_generators() {
        m_e_r_stable &= stage.m_e.transform(g)? == stage.m_e;
    }
    let r_ef_acts_trivially = trivial_action_failure(stage).is_none();
    let s = r.conductor;
    let congruence_inside = r
        .group
        .elements()
        .iter()
        .zip(&r.mask)
        .filter(|(m, _)| {
            m[0] % s == 1 % s && m[1] % s == 0 && m[2] % s == 0 && m[3] % s == 1 % s
        })
        .all(|(_, inside)| *inside);
    let order_formula = r.size() * r.index() == r.group.len()
        && stage.order() == stage.index_m() * stage.index_r();
    let verdict = Verdict::from_bool(
        r_ef_normal && m_e_r_stable && r_ef_acts_trivially && congruence_inside && order_formula,
    );
    Ok(StageChecks {
        r_ef_normal,
        m_e_r_stable,
        r_ef_acts_trivially,
        congruence_inside,
        order_formula,
        verdict,
    })
}

/// Compares `MR/(M_E R^E_F)` with `(M/M_E) ⋊ (R/R^E_F)`: every element of the
/// semidirect product is lifted to `h = (m, r) ∈ H`, products `h₁h₂` are taken
/// with the group law of `G`, and their classes are compared with the
/// semidirect multiplication table. Products with generators of `M_E R^E_F`
/// must not change the class.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientComparison {
    pub order: usize,
    pub table_agrees: bool,
    pub classes_stable: bool,
    pub verdict: Verdict,
}

pub fn compare_quotient(pair: &PairDescriptor, stage: &TowerStage) -> Result<QuotientComparison> {
    let group = &stage.r_ef.group;
    let ring = group.ring();
    let lifts = r_lifts(pair, group);
    let q = &stage.quot_m;
    let elems: Vec<_> = (0..stage.order())
        .map(|x| {
            let (m, c) = stage.decode(x);
            let (mx, my) = q.decode(m);
            let r = &lifts[stage.r_ef.coset_reps[c]];
            pair.elem(vec2(mx, my), r.clone())
        })
        .collect::<Result<_>>()?;
    let classify = |h: &crate::grouppair::GElem| -> Option<usize> {
        let n = h.n();
        let (x, y) = (n[0].to_integer()?, n[1].to_integer()?);
        let x = i128::try_from(x).ok()?;
        let y = i128::try_from(y).ok()?;
        stage.class_of((x, y), &ring.reduce_mat(h.q())?)
    };
    let mut table_agrees = true;
    for (i, hi) in elems.iter().enumerate() {
        for (j, hj) in elems.iter().enumerate() {
            if classify(&pair.mul(hi, hj)?) != Some(stage.mul(i, j)) {
                table_agrees = false;
            }
        }
    }
    let [u, v] = stage.m_e.basis_vectors();
    let mut kernel_gens = vec![pair.n_elem(u)?, pair.n_elem(v)?];
    for (i, inside) in stage.r_ef.mask.iter().enumerate() {
        if *inside {
            kernel_gens.push(pair.q_elem(lifts[i].clone())?);
        }
    }
    let mut classes_stable = true;
    for (i, h) in elems.iter().enumerate() {
        for k in &kernel_gens {
            if classify(&pair.mul(h, k)?) != Some(i) {
                classes_stable = false;
            }
        }
    }
    Ok(QuotientComparison {
        order: stage.order(),
        table_agrees,
        classes_stable,
        verdict: Verdict::from_bool(table_agrees && classes_stable),
    })
}

/// `[M:M_E]` along a sequence of stages, with whether it never decreases and
/// whether it strictly increases.
pub fn m_index_growth(stages: &[TowerStage]) -> (Vec<usize>, bool, bool) {
    let idx: Vec<usize> = stages.iter().map(TowerStage::index_m).collect();
    let monotone = idx.windows(2).all(|w| w[0] <= w[1]);
    let strict = idx.windows(2).all(|w| w[0] < w[1]);
    (idx, monotone, strict)
}
