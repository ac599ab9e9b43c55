use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{Mat2, Rat};
use crate::error::{Error, Result};
use crate::grouppair::{GElem, PairDescriptor};

/// A double coset `HxH` with its decomposition `⊔ y_i H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCoset {
    /// The left-coset representative with the least key.
    pub rep: GElem,
    /// Canonical representatives `y_i`, sorted by key.
    pub left_reps: Vec<GElem>,
    #[serde(rename = "L")]
    pub l: u64,
    pub key: String,
}

type Cache = RwLock<HashMap<String, Arc<DoubleCoset>>>;

/// Double-coset enumeration for one pair, with an optional memo table keyed
/// by left cosets. Results do not depend on whether the memo is enabled.
#[derive(Debug)]
pub struct CosetEngine {
    pair: PairDescriptor,
    cache: Option<Cache>,
}

impl CosetEngine {
    pub fn new(pair: PairDescriptor) -> Self {
        CosetEngine {
            pair,
            cache: Some(RwLock::new(HashMap::new())),
        }
    }

    pub fn without_cache(pair: PairDescriptor) -> Self {
        CosetEngine { pair, cache: None }
    }

    pub fn pair(&self) -> &PairDescriptor {
        &self.pair
    }

    pub fn cache_len(&self) -> usize {
        self.cache.as_ref().map_or(0, |c| c.read().expect("cache lock").len())
    }

    fn enumerate(&self, x: &GElem) -> Result<DoubleCoset> {
        let pair = &self.pair;
        let bound = pair.bounds().coset_enum_max;
        let gens = pair.h_generators();
        let start = pair.canonical_left(x);
        let mut seen: HashMap<String, GElem> = HashMap::from([(start.to_string(), start.clone())]);
        let mut queue = VecDeque::from([start]);
        while let Some(y) = queue.pop_front() {
            for h in &gens {
                let z = pair.canonical_left(&pair.mul(h, &y)?);
                let key = z.to_string();
                if !seen.contains_key(&key) {
                    if seen.len() >= bound {
                        return Err(Error::EnumerationBound { bound });
                    }
                    seen.insert(key, z.clone());
                    queue.push_back(z);
                }
            }
        }
        let mut reps: Vec<(String, GElem)> = seen.into_iter().collect();
        reps.sort_by(|a, b| a.0.cmp(&b.0));
        let key = reps[0].0.clone();
        let rep = reps[0].1.clone();
        let left_reps: Vec<GElem> = reps.into_iter().map(|(_, y)| y).collect();
        Ok(DoubleCoset {
            rep,
            l: left_reps.len() as u64,
            left_reps,
            key,
        })
    }

    /// The double coset `HxH`.
    pub fn double_coset(&self, x: &GElem) -> Result<Arc<DoubleCoset>> {
        let Some(cache) = &self.cache else {
            return Ok(Arc::new(self.enumerate(x)?));
        };
        let lk = self.pair.left_key(x);
        if let Some(dc) = cache.read().expect("cache lock").get(&lk) {
            return Ok(dc.clone());
        }
        let dc = Arc::new(self.enumerate(x)?);
        let mut w = cache.write().expect("cache lock");
        for y in &dc.left_reps {
            w.entry(y.to_string()).or_insert_with(|| dc.clone());
        }
        Ok(dc)
    }

    /// Canonical representatives of the left cosets `yH ⊆ HxH`.
    pub fn left_coset_reps(&self, x: &GElem) -> Result<Vec<GElem>> {
        Ok(self.double_coset(x)?.left_reps.clone())
    }

    /// `L(x)`, the number of left cosets in `HxH`.
    pub fn l_of(&self, x: &GElem) -> Result<u64> {
        Ok(self.double_coset(x)?.l)
    }

    /// `Δ(x) = L(x)/L(x⁻¹)`.
    pub fn delta(&self, x: &GElem) -> Result<Rat> {
        let l = self.l_of(x)?;
        let li = self.l_of(&self.pair.inv(x)?)?;
        Ok(Rat::new(l, li))
    }

    /// The least left-coset key in `HxH`; equal exactly for equal double cosets.
    pub fn canonical_key(&self, x: &GElem) -> Result<String> {
        Ok(self.double_coset(x)?.key.clone())
    }

    /// `L(x)` from the index formulas: `[M:M_q][R:R_q]` for `x = q`, and
    /// `[R:R_{n,M}]` for `x = n`. `None` for mixed elements.
    pub fn l_by_indices(&self, x: &GElem) -> Option<Result<BigInt>> {
        let pair = &self.pair;
        if x.n().iter().all(Rat::is_zero) {
            let q = x.q();
            Some(
                pair.index_m_q(q)
                    .and_then(|m| pair.index_r_q(q).map(|r| m * BigInt::from(r))),
            )
        } else if *x.q() == Mat2::identity() {
            Some(pair.index_r_nm(x.n()).map(BigInt::from))
        } else {
            None
        }
    }
}
