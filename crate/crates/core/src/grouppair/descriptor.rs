use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::mat2::{fmt_vec, parse_vec2, vec_add, vec_is_integral, vec_neg};
use crate::arith::residue::{MatGroupMod, ResidueRing};
use crate::arith::valuation::{in_z_inv_p, is_prime, is_signed_p_power};
use crate::arith::{Lattice, Mat2, QuadInt, Rat, Vec2};
use crate::error::{Error, Result};

/// Whether `N` is the plane `K²` or the Heisenberg quotient `(ℚ/ℤ) × ℚ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Planar,
    Heisenberg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseRing {
    /// ℚ
    Rationals,
    /// ℤ[1/p]
    ZInvP(u64),
}

impl BaseRing {
    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            BaseRing::Rationals => true,
            BaseRing::ZInvP(p) => in_z_inv_p(x, *p),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Rationals => write!(f, "Q"),
            BaseRing::ZInvP(p) => write!(f, "Z[1/{p}]"),
        }
    }
}

/// The shape of the acting group `Q ⊆ GL(2, K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QKind {
    /// All of `GL(2, K)`; over ℤ[1/p] the determinant is restricted to `±p^ℤ`.
    FullGL2,
    /// Multiplication by `ℚ(√d)^×` on the basis `(1, √d)`: matrices `[[a, db], [b, a]]`.
    QuadTorus(i64),
    /// Upper unipotent matrices `[[1, t], [0, 1]]`.
    Unipotent,
}

/// Size limits for every enumeration the library performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub coset_enum_max: usize,
    pub conductor_max: u64,
    pub stage_order_max: usize,
    pub residue_group_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            coset_enum_max: 100_000,
            conductor_max: 1_000,
            stage_order_max: 1_000_000,
            residue_group_max: 1_000_000,
        }
    }
}

type ResidueCache = Arc<RwLock<HashMap<u64, Arc<MatGroupMod>>>>;

/// A concrete pair `(G, H) = (N ⋊ Q, M ⋊ R)`.
///
/// `M` is always the integer lattice (for the Heisenberg family, `{0} × ℤ`,
/// handled through its preimage `ℤ²` in `ℚ²`), and `R = Q ∩ GL(2, ℤ)`.
#[derive(Clone)]
pub struct PairDescriptor {
    family: Family,
    base_ring: BaseRing,
    q_kind: QKind,
    r_generators: Vec<Mat2>,
    unit: Option<QuadInt>,
    bounds: Bounds,
    residue_cache: ResidueCache,
}

impl fmt::Debug for PairDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairDescriptor")
            .field("family", &self.family)
            .field("base_ring", &self.base_ring)
            .field("q_kind", &self.q_kind)
            .field("r_generators", &self.r_generators)
            .finish()
    }
}

impl PartialEq for PairDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.base_ring == other.base_ring
            && self.q_kind == other.q_kind
            && self.r_generators == other.r_generators
    }
}

fn default_r_generators(kind: QKind, unit: Option<&QuadInt>) -> Vec<Mat2> {
    match kind {
        QKind::FullGL2 => vec![
            Mat2::new(1, 1, 0, 1),
            Mat2::new(1, 0, 1, 1),
            Mat2::new(1, 0, 0, -1),
        ],
        QKind::QuadTorus(_) => vec![
            Mat2::scalar(-1),
            unit.expect("torus descriptors carry their unit").to_matrix(),
        ],
        QKind::Unipotent => vec![Mat2::new(1, 1, 0, 1)],
    }
}

impl PairDescriptor {
    pub fn new(family: Family, base_ring: BaseRing, q_kind: QKind) -> Result<Self> {
        if let BaseRing::ZInvP(p) = base_ring {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if q_kind != QKind::FullGL2 {
                return Err(Error::config(
                    "base_ring",
                    "Z[1/p] is only supported with Q_kind FullGL2",
                ));
            }
        }
        if family == Family::Heisenberg && q_kind != QKind::Unipotent {
            return Err(Error::config("Q_kind", "the Heisenberg family needs Q_kind Unipotent"));
        }
        let unit = match q_kind {
            QKind::QuadTorus(d) => Some(crate::families::fundamental_unit(d)?),
            _ => None,
        };
        let r_generators = default_r_generators(q_kind, unit.as_ref());
        Ok(PairDescriptor {
            family,
            base_ring,
            q_kind,
            r_generators,
            unit,
            bounds: Bounds::default(),
            residue_cache: Default::default(),
        })
    }

    /// `GL(2, K)` acting on `K²`, with `K = ℚ` or `ℤ[1/p]`.
    pub fn full_gl2(base_ring: BaseRing) -> Result<Self> {
        PairDescriptor::new(Family::Planar, base_ring, QKind::FullGL2)
    }

    /// `ℚ(√d)^×` acting on `ℚ(√d) ≅ ℚ²`.
    pub fn quad_torus(d: i64) -> Result<Self> {
        PairDescriptor::new(Family::Planar, BaseRing::Rationals, QKind::QuadTorus(d))
    }

    /// `ℚ` acting on `(ℚ/ℤ) × ℚ` by `t·(a, b) = (a + tb, b)`.
    pub fn heisenberg() -> Result<Self> {
        PairDescriptor::new(Family::Heisenberg, BaseRing::Rationals, QKind::Unipotent)
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    /// Replaces the generating set used for `R`; each must lie in `R`.
    pub fn with_r_generators(mut self, gens: Vec<Mat2>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::config("R_generators", "at least one generator is required"));
        }
        for g in &gens {
            if !self.in_r(g) {
                return Err(Error::config("R_generators", format!("{g} is not in R")));
            }
        }
        self.r_generators = gens;
        self.residue_cache = Default::default();
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn base_ring(&self) -> BaseRing {
        self.base_ring
    }

    pub fn q_kind(&self) -> QKind {
        self.q_kind
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn r_generators(&self) -> &[Mat2] {
        &self.r_generators
    }

    /// The fundamental unit, for torus descriptors.
    pub fn unit(&self) -> Option<&QuadInt> {
        self.unit.as_ref()
    }

    /// `M` as a lattice in ℚ² (for the Heisenberg family, its preimage ℤ²).
    pub fn m_lattice(&self) -> Lattice {
        Lattice::standard()
    }

    /// Whether diagonal scalars `diag(λ, λ)` lie in `Q`.
    pub fn has_scalars(&self) -> bool {
        self.q_kind != QKind::Unipotent
    }

    pub fn describe(&self) -> Value {
        let kind = match self.q_kind {
            QKind::FullGL2 => "FullGL2".to_string(),
            QKind::QuadTorus(d) => format!("QuadTorus({d})"),
            QKind::Unipotent => "Unipotent".to_string(),
        };
        serde_json::json!({
            "family": self.family,
            "base_ring": self.base_ring.to_string(),
            "Q_kind": kind,
            "R_generators": self.r_generators,
        })
    }

    // ---- membership ----

    pub fn in_n(&self, n: &Vec2) -> bool {
        self.base_ring.contains(&n[0]) && self.base_ring.contains(&n[1])
    }

    pub fn in_m(&self, n: &Vec2) -> bool {
        vec_is_integral(n)
    }

    pub fn in_q(&self, q: &Mat2) -> bool {
        let det = q.det();
        if det.is_zero() {
            return false;
        }
        let shape = match self.q_kind {
            QKind::FullGL2 => true,
            QKind::QuadTorus(d) => q.a == q.d && q.b == &q.c * &Rat::int(d),
            QKind::Unipotent => q.a.is_one() && q.d.is_one() && q.c.is_zero(),
        };
        if !shape {
            return false;
        }
        match self.base_ring {
            BaseRing::Rationals => true,
            BaseRing::ZInvP(p) => {
                q.entries().iter().all(|e| in_z_inv_p(e, p)) && is_signed_p_power(&det, p)
            }
        }
    }

    pub fn in_r(&self, q: &Mat2) -> bool {
        self.in_q(q) && q.is_integral() && q.det().abs().is_one()
    }

    pub fn check_q(&self, q: &Mat2) -> Result<()> {
        if self.in_q(q) {
            Ok(())
        } else {
            Err(Error::NotInQ(q.to_string()))
        }
    }

    pub fn check_n(&self, n: &Vec2) -> Result<()> {
        if self.in_n(n) {
            Ok(())
        } else {
            Err(Error::NotInN(fmt_vec(n)))
        }
    }

    // ---- elements ----

    fn normalize_n(&self, n: Vec2) -> Vec2 {
        match self.family {
            Family::Planar => n,
            Family::Heisenberg => {
                let [a, b] = n;
                [a.frac(), b]
            }
        }
    }

    pub(crate) fn make(&self, n: Vec2, q: Mat2) -> GElem {
        GElem {
            family: self.family,
            n: self.normalize_n(n),
            q,
        }
    }

    /// The element `(n, q)`, checked against `N` and `Q`.
    pub fn elem(&self, n: Vec2, q: Mat2) -> Result<GElem> {
        self.check_n(&n)?;
        self.check_q(&q)?;
        Ok(self.make(n, q))
    }

    pub fn identity(&self) -> GElem {
        self.make([Rat::zero(), Rat::zero()], Mat2::identity())
    }

    pub fn n_elem(&self, n: Vec2) -> Result<GElem> {
        self.elem(n, Mat2::identity())
    }

    pub fn q_elem(&self, q: Mat2) -> Result<GElem> {
        self.elem([Rat::zero(), Rat::zero()], q)
    }

    fn check_family(&self, x: &GElem) -> Result<()> {
        if x.family == self.family {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub(crate) fn mul_unchecked(&self, x: &GElem, y: &GElem) -> GElem {
        self.make(vec_add(&x.n, &x.q.apply(&y.n)), x.q.mul(&y.q))
    }

    pub(crate) fn inv_unchecked(&self, x: &GElem) -> GElem {
        let qi = x.q.inverse().expect("elements of Q are invertible");
        let n = vec_neg(&qi.apply(&x.n));
        self.make(n, qi)
    }

    /// `(n1, q1)(n2, q2) = (n1 + q1·n2, q1q2)`.
    pub fn mul(&self, x: &GElem, y: &GElem) -> Result<GElem> {
        self.check_family(x)?;
        self.check_family(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub fn inv(&self, x: &GElem) -> Result<GElem> {
        self.check_family(x)?;
        let qi = x.q.inverse()?;
        self.check_q(&qi)?;
        Ok(self.inv_unchecked(x))
    }

    /// `x y x⁻¹`.
    pub fn conj(&self, x: &GElem, y: &GElem) -> Result<GElem> {
        let xy = self.mul(x, y)?;
        let xi = self.inv(x)?;
        self.mul(&xy, &xi)
    }

    pub fn in_h(&self, x: &GElem) -> bool {
        x.family == self.family && self.in_m(&x.n) && self.in_r(&x.q)
    }

    /// Generators of `M` as group elements.
    pub fn m_generators(&self) -> Vec<GElem> {
        let mut out = Vec::new();
        if self.family == Family::Planar {
            out.push(self.make([Rat::one(), Rat::zero()], Mat2::identity()));
        }
        out.push(self.make([Rat::zero(), Rat::one()], Mat2::identity()));
        out
    }

    /// Generators of `H`: those of `M` followed by those of `R`.
    pub fn h_generators(&self) -> Vec<GElem> {
        let mut out = self.m_generators();
        for r in &self.r_generators {
            out.push(self.make([Rat::zero(), Rat::zero()], r.clone()));
        }
        out
    }

    // ---- canonical forms ----

    /// The representative of the right coset `qR` fixed by this crate.
    ///
    /// Full GL(2): the column Hermite basis of the lattice `qℤ²`.
    /// Unipotent: `t` reduced into `[0, 1)`. Torus: `β = a + b√d` with
    /// `a, b ≥ 0` and `1 ≤ |β/β'| < r0²` where `'` is conjugation.
    pub fn canonical_q(&self, q: &Mat2) -> Mat2 {
        match self.q_kind {
            QKind::FullGL2 => Lattice::hnf(q).expect("elements of Q are invertible").basis(),
            QKind::Unipotent => Mat2::new(1, q.b.frac(), 0, 1),
            QKind::QuadTorus(_) => {
                let unit = self.unit.as_ref().expect("torus descriptors carry their unit");
                let r0 = unit.to_matrix();
                let r0_inv = r0.inverse().expect("units are invertible");
                let mut beta = q.clone();
                loop {
                    if (&beta.a * &beta.c).is_negative() {
                        beta = beta.mul(&r0);
                        continue;
                    }
                    let prev = beta.mul(&r0_inv);
                    if !(&prev.a * &prev.c).is_negative() {
                        beta = prev;
                        continue;
                    }
                    break;
                }
                if beta.a.is_negative() || (beta.a.is_zero() && beta.c.is_negative()) {
                    beta = beta.scale(&Rat::int(-1));
                }
                beta
            }
        }
    }

    /// The canonical representative of the left coset `xH`: `q` replaced by
    /// [`canonical_q`](Self::canonical_q) and `n` reduced modulo `qM`.
    pub fn canonical_left(&self, x: &GElem) -> GElem {
        let q = self.canonical_q(&x.q);
        let lattice = Lattice::hnf(&q).expect("elements of Q are invertible");
        let n = lattice.reduce(&x.n);
        self.make(n, q)
    }

    /// String key of the left coset `xH`; equal keys exactly when `xH = yH`.
    pub fn left_key(&self, x: &GElem) -> String {
        self.canonical_left(x).to_string()
    }

    // ---- residue groups ----

    /// `R/R(s)` as a finite matrix group generated by the reduced generators.
    pub fn r_mod(&self, s: u64) -> Result<Arc<MatGroupMod>> {
        if let Some(g) = self.residue_cache.read().expect("cache lock").get(&s) {
            return Ok(g.clone());
        }
        let ring = ResidueRing::new(s)?;
        let gens: Vec<_> = self
            .r_generators
            .iter()
            .map(|g| ring.reduce_mat(g).expect("R generators are integral"))
            .collect();
        let group = Arc::new(MatGroupMod::generate(ring, &gens, self.bounds.residue_group_max)?);
        self.residue_cache
            .write()
            .expect("cache lock")
            .entry(s)
            .or_insert_with(|| group.clone());
        Ok(group)
    }

    pub(crate) fn check_conductor(&self, s: &BigInt) -> Result<u64> {
        let bound = self.bounds.conductor_max;
        match u64::try_from(s) {
            Ok(v) if v <= bound => Ok(v),
            Ok(v) => Err(Error::ConductorOverflow { needed: v, bound }),
            Err(_) => Err(Error::ConductorOverflow { needed: u64::MAX, bound }),
        }
    }

    // ---- parsing ----

    /// Reads an element written as `n=(x,y);q=[[a,b],[c,d]]` (either part
    /// optional, `t=...` for a unipotent parameter) or as a JSON object with
    /// `n` and `q` (or `t`) fields.
    pub fn parse_elem(&self, s: &str) -> Result<GElem> {
        let s = s.trim();
        if s.starts_with('{') {
            let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
            return self.elem_from_json(&v);
        }
        let mut n = [Rat::zero(), Rat::zero()];
        let mut q = Mat2::identity();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            match key.trim() {
                "n" => n = parse_vec2(value)?,
                "q" => q = value.parse()?,
                "t" => q = Mat2::new(Rat::one(), value.trim().parse::<Rat>()?, Rat::zero(), Rat::one()),
                other => return Err(Error::Parse(format!("unknown element field {other:?}"))),
            }
        }
        self.elem(n, q)
    }

    pub fn elem_from_json(&self, v: &Value) -> Result<GElem> {
        let parse = |e: serde_json::Error| Error::Parse(e.to_string());
        let n = match v.get("n") {
            Some(n) => serde_json::from_value::<Vec2>(n.clone()).map_err(parse)?,
            None => [Rat::zero(), Rat::zero()],
        };
        let q = match (v.get("q"), v.get("t")) {
            (Some(q), _) => serde_json::from_value::<Mat2>(q.clone()).map_err(parse)?,
            (None, Some(t)) => {
                let t: Rat = serde_json::from_value(t.clone()).map_err(parse)?;
                Mat2::new(Rat::one(), t, Rat::zero(), Rat::one())
            }
            (None, None) => Mat2::identity(),
        };
        self.elem(n, q)
    }
}

/// An element `(n, q)` of `G = N ⋊ Q`, with `N` written additively.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    family: Family,
    n: Vec2,
    q: Mat2,
}

impl GElem {
    pub fn n(&self) -> &Vec2 {
        &self.n
    }

    pub fn q(&self) -> &Mat2 {
        &self.q
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn to_json(&self) -> Value {
        match self.family {
            Family::Planar => serde_json::json!({ "n": self.n, "q": self.q }),
            Family::Heisenberg => serde_json::json!({ "n": self.n, "t": self.q.b }),
        }
    }
}

impl Serialize for GElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Planar => write!(f, "n={};q={}", fmt_vec(&self.n), self.q),
            Family::Heisenberg => write!(f, "n={};t={}", fmt_vec(&self.n), self.q.b),
        }
    }
}

impl fmt::Debug for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
