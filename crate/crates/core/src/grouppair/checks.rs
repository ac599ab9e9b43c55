//! Verification predicates: finiteness of the stabilizer indices, finite-stage
//! reducedness, the product decompositions of stabilizers, and downward
//! directedness of the conjugates of `M`.

use num_bigint::BigInt;
use serde::Serialize;

use super::descriptor::{GElem, PairDescriptor};
use super::stabilizers::lcm_levels;
use crate::arith::mat2::vec_sub;
use crate::arith::residue::ResidueRing;
use crate::arith::{Lattice, Mat2, Rat, Vec2};
use crate::error::{Error, Result};
use crate::report::Verdict;

/// Errors that mean "a bound was hit" rather than "the input is wrong".
pub(crate) fn is_bound_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ConductorOverflow { .. } | Error::SizeCap { .. } | Error::EnumerationBound { .. }
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexEntry {
    /// `"M:M_q"`, `"R:R_q"` or `"R:R_nM"`.
    pub kind: &'static str,
    pub element: String,
    pub index: Option<String>,
    /// The same index by an independent method, when one applies.
    pub cross_check: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeReport {
    pub entries: Vec<IndexEntry>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixIndices {
    pub size: usize,
    pub m_lattice: Lattice,
    pub m_index: String,
    pub r_level: Option<u64>,
    pub r_index: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulWitness {
    pub generator: Mat2,
    /// Smallest `s` such that the generator acts nontrivially on `(1/s)ℤ²/ℤ²`.
    pub level: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedReport {
    pub prefixes: Vec<PrefixIndices>,
    pub witnesses: Vec<FaithfulWitness>,
    /// `Pass` means certified at this stage; otherwise `Inconclusive`.
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: usize,
    pub violations: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectedPair {
    pub q1: Mat2,
    pub q2: Mat2,
    pub witness: Option<Mat2>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DownwardReport {
    pub pairs: Vec<DirectedPair>,
    pub verdict: Verdict,
}

const WITNESS_LEVEL_MAX: u64 = 64;

impl PairDescriptor {
    /// Computes `[M:M_q]`, `[R:R_q]` and `[R:R_{n,M}]` on the samples, each
    /// index with an independent cross-check.
    pub fn is_hecke_pair(&self, samples_q: &[Mat2], samples_n: &[Vec2]) -> Result<HeckeReport> {
        let mut entries = Vec::new();
        let mut verdict = Verdict::Pass;
        let mut record = |kind: &'static str,
                          element: String,
                          main: Result<String>,
                          cross: Result<String>|
         -> Result<()> {
            let mut entry = IndexEntry {
                kind,
                element,
                index: None,
                cross_check: None,
                note: None,
            };
            match (main, cross) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        verdict = Verdict::Fail;
                        entry.note = Some("methods disagree".into());
                    }
                    entry.index = Some(a);
                    entry.cross_check = Some(b);
                }
                (Err(e), _) | (_, Err(e)) if is_bound_error(&e) => {
                    verdict = verdict.and(Verdict::Inconclusive);
                    entry.note = Some(format!("inconclusive at bound: {e}"));
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
            entries.push(entry);
            Ok(())
        };
        for q in samples_q {
            self.check_q(q)?;
            let main = self.index_m_q(q).map(|v| v.to_string());
            // [M:M_q] = |M/M_q|, counted as the product of the invariant factors.
            let cross = self.m_q(q).and_then(|l| l.smith_invariants()).map(|(a, b)| (a * b).to_string());
            record("M:M_q", q.to_string(), main, cross)?;
            let main = self.index_r_q(q).map(|v| v.to_string());
            let cross = self.index_r_q_by_orbit(q).map(|v| v.to_string());
            record("R:R_q", q.to_string(), main, cross)?;
        }
        for n in samples_n {
            self.check_n(n)?;
            let main = self.index_r_nm(n).map(|v| v.to_string());
            let cross = self.index_r_nm_by_stabilizer(n).map(|v| v.to_string());
            record("R:R_nM", crate::arith::mat2::fmt_vec(n), main, cross)?;
        }
        Ok(HeckeReport { entries, verdict })
    }

    /// `⋂_{q ∈ qs} R_q` inside `R/R(s)` at the lcm of the conductors, with its index.
    pub fn index_r_stage(&self, qs: &[Mat2]) -> Result<(u64, u64)> {
        let s = lcm_levels(qs.iter().map(|q| self.conductor_q(q)));
        let s = self.check_conductor(&s)?;
        let group = self.r_mod(s)?;
        let stabs = qs.iter().map(|q| self.stab_q(q)).collect::<Result<Vec<_>>>()?;
        let count = group
            .elements()
            .iter()
            .filter(|r| {
                stabs.iter().all(|st| {
                    let sub = ResidueRing::new(st.level).expect("positive level");
                    let reduced = r.map(|e| e % sub.modulus());
                    st.members.binary_search(&reduced).is_ok()
                })
            })
            .count();
        Ok((s, (group.len() / count) as u64))
    }

    /// Finite-stage evidence for reducedness: along the prefixes of `stage`,
    /// the index of `⋂ M_q` in `M` and of `⋂ R_q` in `R`, plus for each
    /// `R`-generator a level at which it acts nontrivially on `N/M`.
    ///
    /// Certified when the `M`-indices strictly increase over at least two
    /// prefixes and every generator has a witness; inconclusive otherwise.
    pub fn reduced_check(&self, stage: &[Mat2]) -> Result<ReducedReport> {
        let mut prefixes = Vec::new();
        let mut lattice = self.m_lattice();
        let mut increasing = true;
        let mut last = BigInt::from(1);
        for (k, q) in stage.iter().enumerate() {
            lattice = lattice.intersect(&self.m_q(q)?);
            let idx = self.m_lattice().index_of(&lattice)?;
            if idx <= last && k > 0 {
                increasing = false;
            }
            last = idx.clone();
            let (r_level, r_index) = match self.index_r_stage(&stage[..=k]) {
                Ok((s, i)) => (Some(s), Some(i)),
                Err(e) if is_bound_error(&e) => (None, None),
                Err(e) => return Err(e),
            };
            prefixes.push(PrefixIndices {
                size: k + 1,
                m_lattice: lattice.clone(),
                m_index: idx.to_string(),
                r_level,
                r_index,
            });
        }
        let witnesses: Vec<FaithfulWitness> = self
            .r_generators()
            .iter()
            .map(|g| FaithfulWitness {
                generator: g.clone(),
                level: nontrivial_level(g),
            })
            .collect();
        let certified = stage.len() >= 2
            && increasing
            && last > BigInt::from(1)
            && witnesses.iter().all(|w| w.level.is_some());
        Ok(ReducedReport {
            prefixes,
            witnesses,
            verdict: if certified { Verdict::Pass } else { Verdict::Inconclusive },
        })
    }

    /// Checks, for every sample `x = q·n` and `h`, that membership in the
    /// stabilizers computed from the group law matches their product forms:
    /// `H_n = M·R_{n,M}`, `H_q = M_q·R_q`, `H_{qn} ∩ H_q = M_q(qR_{n,M}q⁻¹ ∩ R)`,
    /// the three descriptions of `R_{n,M}`, and for the finite set
    /// `X = Q₀N₀` the intersection `⋂_{x∈X} H_x` against
    /// `(⋂ M_q)(⋂ qR_{n,M}q⁻¹ ∩ R)`.
    pub fn verify_stabilizer_identities(
        &self,
        x_samples: &[GElem],
        h_samples: &[GElem],
    ) -> Result<IdentityReport> {
        let mut checks = 0usize;
        let mut violations = Vec::new();
        let mut check = |name: &str, x: &str, h: &GElem, left: bool, right: bool| {
            checks += 1;
            if left != right {
                violations.push(format!("{name}: x={x}, h={h}: group law {left}, product form {right}"));
            }
        };
        // h ∈ H ∩ yHy⁻¹ computed from the group law
        let in_stab = |h: &GElem, y: &GElem| -> bool {
            let yi = self.inv_unchecked(y);
            self.in_h(h) && self.in_h(&self.mul_unchecked(&self.mul_unchecked(&yi, h), y))
        };
        let zero = [Rat::zero(), Rat::zero()];
        let mut q_parts = vec![Mat2::identity()];
        let mut n_parts = vec![zero.clone()];
        for x in x_samples {
            let q = x.q().clone();
            let qi = q.inverse()?;
            let n = qi.apply(x.n());
            let n_el = self.make(n.clone(), Mat2::identity());
            let q_el = self.make(zero.clone(), q.clone());
            let m_q = self.m_q(&q)?;
            for h in h_samples {
                let (m, r) = (h.n(), h.q());
                let in_r = self.in_r(r);
                let label = x.to_string();
                check(
                    "H_n = M R_nM",
                    &label,
                    h,
                    in_stab(h, &n_el),
                    self.in_m(m) && in_r && self.in_r_nm(r, &n),
                );
                check(
                    "H_q = M_q R_q",
                    &label,
                    h,
                    in_stab(h, &q_el),
                    m_q.contains(m) && in_r && self.in_r_q(r, &q),
                );
                let conj = qi.mul(r).mul(&q);
                check(
                    "H_qn ∩ H_q = M_q (q R_nM q^-1 ∩ R)",
                    &label,
                    h,
                    in_stab(h, x) && in_stab(h, &q_el),
                    m_q.contains(m) && in_r && self.in_r(&conj) && self.in_r_nm(&conj, &n),
                );
                if in_r {
                    let r_el = self.make(zero.clone(), r.clone());
                    let moved = self.conj(&r_el, &n_el)?;
                    let two = self.in_m(&vec_sub(moved.n(), &n));
                    let back = self.mul_unchecked(&self.mul_unchecked(&self.inv_unchecked(&n_el), &r_el), &n_el);
                    let three = self.in_m(back.n()) && self.in_r(back.q());
                    check("R_nM: r n r^-1 ∈ nM", &label, h, self.in_r_nm(r, &n), two);
                    check("R_nM: r ∈ nMRn^-1", &label, h, two, three);
                }
            }
            if !q_parts.contains(&q) {
                q_parts.push(q);
            }
            if !n_parts.contains(&n) {
                n_parts.push(n);
            }
        }
        let mut m_all = self.m_lattice();
        for q in &q_parts {
            m_all = m_all.intersect(&self.m_q(q)?);
        }
        let xs: Vec<GElem> = q_parts
            .iter()
            .flat_map(|q| {
                n_parts.iter().map(move |n| (q.clone(), n.clone()))
            })
            .map(|(q, n)| self.make(q.apply(&n), q))
            .collect();
        for h in h_samples {
            let (m, r) = (h.n(), h.q());
            let left = xs.iter().all(|x| in_stab(h, x));
            let right = m_all.contains(m)
                && self.in_r(r)
                && q_parts.iter().all(|q| {
                    let conj = q.inverse().expect("invertible").mul(r).mul(q);
                    self.in_r(&conj) && n_parts.iter().all(|n| self.in_r_nm(&conj, n))
                });
            check("H_X = M_X (R_{N,M} ∩ R)_X", &format!("|X|={}", xs.len()), h, left, right);
        }
        let verdict = Verdict::from_bool(violations.is_empty());
        Ok(IdentityReport {
            checks,
            violations,
            verdict,
        })
    }

    /// For each pair of samples, a scalar `k = diag(λ, λ) ∈ Q` with
    /// `kM ⊆ q1·M ∩ q2·M`; `λ` is the common denominator of `q1⁻¹` and `q2⁻¹`.
    pub fn downward_directed_check(&self, q_samples: &[Mat2]) -> Result<DownwardReport> {
        let mut pairs = Vec::new();
        let mut ok = true;
        let mut idx = Vec::new();
        for i in 0..q_samples.len() {
            for j in i + 1..q_samples.len() {
                idx.push((i, j));
            }
        }
        if q_samples.len() == 1 {
            idx.push((0, 0));
        }
        for (i, j) in idx {
            let (q1, q2) = (&q_samples[i], &q_samples[j]);
            self.check_q(q1)?;
            self.check_q(q2)?;
            let lambda = lcm_levels([q1.inverse()?.denominator(), q2.inverse()?.denominator()]);
            let k = Mat2::scalar(Rat::int(lambda));
            let target = self.m_lattice().transform(q1)?.intersect(&self.m_lattice().transform(q2)?);
            let witness = if self.in_q(&k) && self.m_lattice().transform(&k)?.is_sublattice_of(&target) {
                Some(k)
            } else {
                ok = false;
                None
            };
            pairs.push(DirectedPair {
                q1: q1.clone(),
                q2: q2.clone(),
                witness,
            });
        }
        Ok(DownwardReport {
            pairs,
            verdict: Verdict::from_bool(ok),
        })
    }
}

fn nontrivial_level(g: &Mat2) -> Option<u64> {
    (2..=WITNESS_LEVEL_MAX).find(|&s| {
        let ring = ResidueRing::new(s).expect("positive");
        ring.reduce_mat(g).map(|m| m != ring.identity()).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vec2;
    use crate::grouppair::BaseRing;

    fn gl2_2() -> PairDescriptor {
        PairDescriptor::full_gl2(BaseRing::ZInvP(2)).unwrap()
    }

    #[test]
    fn hecke_indices_for_the_basic_samples() {
        let g = gl2_2();
        let rep = g
            .is_hecke_pair(&[Mat2::diag(2, 1)], &[vec2(Rat::new(1, 2), 0)])
            .unwrap();
        let got: Vec<_> = rep.entries.iter().map(|e| e.index.clone().unwrap()).collect();
        assert_eq!(got, ["2", "3", "3"]);
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn hecke_indices_trivial_in_h() {
        let g = gl2_2();
        let rep = g
            .is_hecke_pair(&[Mat2::new(0, 1, 1, 0)], &[vec2(3, 4)])
            .unwrap();
        assert!(rep.entries.iter().all(|e| e.index.as_deref() == Some("1")));
    }

    #[test]
    fn reduced_check_m_part() {
        let g = gl2_2();
        let rep = g
            .reduced_check(&[Mat2::diag(2, 1), Mat2::diag(1, 2), Mat2::diag(4, 1)])
            .unwrap();
        let last = rep.prefixes.last().unwrap();
        assert_eq!(last.m_index, "8");
        assert_eq!(last.m_lattice, Lattice::hnf(&Mat2::diag(4, 2)).unwrap());
        assert_eq!(rep.verdict, Verdict::Pass);
        let trivial = g.reduced_check(&[Mat2::identity()]).unwrap();
        assert_eq!(trivial.prefixes[0].m_index, "1");
        assert_eq!(trivial.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn torus_unit_acts_nontrivially_mod_3() {
        let g = PairDescriptor::quad_torus(2).unwrap();
        let r0 = g.unit().unwrap().to_matrix();
        let ring = ResidueRing::new(3).unwrap();
        assert_ne!(ring.reduce_mat(&r0).unwrap(), ring.identity());
        let rep = g.reduced_check(&[Mat2::new(3, 0, 0, 3)]).unwrap();
        assert!(rep.witnesses.iter().all(|w| w.level.is_some()));
    }

    #[test]
    fn stabilizer_identities_on_examples() {
        let g = gl2_2();
        let x = g.n_elem(vec2(Rat::new(1, 2), 0)).unwrap();
        let h1 = g.n_elem(vec2(1, 0)).unwrap();
        let h2 = g.q_elem(Mat2::new(1, 1, 0, 1)).unwrap();
        let rep = g
            .verify_stabilizer_identities(std::slice::from_ref(&x), &[g.identity(), h1.clone(), h2.clone()])
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.violations);
        assert!(g.in_r_nm(h2.q(), &vec2(0, 0)));
        // (1,1;0,1) fixes (1/2, 0), the transpose does not
        assert!(g.in_r_nm(h2.q(), x.n()));
        assert!(!g.in_r_nm(&Mat2::new(1, 0, 1, 1), x.n()));
    }

    #[test]
    fn downward_examples() {
        let g = PairDescriptor::full_gl2(BaseRing::Rationals).unwrap();
        let rep = g.downward_directed_check(&[Mat2::diag(2, 1), Mat2::diag(1, 2)]).unwrap();
        assert_eq!(rep.pairs[0].witness, Some(Mat2::scalar(2)));
        let rep = g.downward_directed_check(&[Mat2::identity(), Mat2::identity()]).unwrap();
        assert_eq!(rep.pairs[0].witness, Some(Mat2::identity()));
        let q1 = Mat2::new(1, 1, 0, 1).mul(&Mat2::diag(2, 1));
        let rep = g.downward_directed_check(&[q1, Mat2::diag(3, 1)]).unwrap();
        assert_eq!(rep.pairs[0].witness, Some(Mat2::scalar(6)));
        assert_eq!(rep.verdict, Verdict::Pass);
    }
}
