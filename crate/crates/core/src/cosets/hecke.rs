use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde_json::{json, Value};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::grouppair::{GElem, PairDescriptor};

use super::double_coset::CosetEngine;

/// One term `c·χ_{HaH}` of a Hecke algebra element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub rep: GElem,
    pub coeff: Rat,
}

/// A finitely supported bi-`H`-invariant function, stored as coefficients
/// on double cosets keyed by their canonical key. Zero coefficients are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<String, Term>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the double coset with the given key.
    pub fn coeff(&self, key: &str) -> Rat {
        self.terms.get(key).map_or_else(Rat::zero, |t| t.coeff.clone())
    }

    fn add_term(&mut self, key: String, rep: &GElem, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(|| Term {
            rep: rep.clone(),
            coeff: Rat::zero(),
        });
        entry.coeff += coeff;
        if entry.coeff.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (k, t) in &other.terms {
            out.add_term(k.clone(), &t.rep, &t.coeff);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (k, t) in &self.terms {
            out.add_term(k.clone(), &t.rep, &(&t.coeff * c));
        }
        out
    }

    /// `{"terms":[{"rep": .., "coeff": "num/den"}]}`, sorted by key.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .values()
            .map(|t| json!({"rep": t.rep.to_json(), "coeff": t.coeff.to_string()}))
            .collect();
        json!({ "terms": terms })
    }
}

/// Per-pair product table of `χ_A * χ_B`: for each resulting double coset,
/// its key, a representative and the coefficient.
type Products = Vec<(String, GElem, Rat)>;

type ProductCache = HashMap<(String, String), Arc<Products>>;

/// The Hecke algebra of a pair, built on a [`CosetEngine`].
#[derive(Debug)]
pub struct HeckeAlgebra {
    engine: CosetEngine,
    products: Option<RwLock<ProductCache>>,
}

impl HeckeAlgebra {
    pub fn new(pair: PairDescriptor) -> Self {
        HeckeAlgebra {
            engine: CosetEngine::new(pair),
            products: Some(RwLock::new(HashMap::new())),
        }
    }

    pub fn without_cache(pair: PairDescriptor) -> Self {
        HeckeAlgebra {
            engine: CosetEngine::without_cache(pair),
            products: None,
        }
    }

    pub fn engine(&self) -> &CosetEngine {
        &self.engine
    }

    pub fn pair(&self) -> &PairDescriptor {
        self.engine.pair()
    }

    /// `χ_{HxH}`.
    pub fn chi(&self, x: &GElem) -> Result<HeckeElement> {
        self.term(x, &Rat::one())
    }

    /// `c·χ_{HxH}`.
    pub fn term(&self, x: &GElem, c: &Rat) -> Result<HeckeElement> {
        let dc = self.engine.double_coset(x)?;
        let mut out = HeckeElement::zero();
        out.add_term(dc.key.clone(), &dc.rep, c);
        Ok(out)
    }

    /// `χ_H`, the unit.
    pub fn identity(&self) -> HeckeElement {
        self.chi(&self.pair().identity()).expect("H is a single coset")
    }

    fn product_of_cosets(&self, a: &GElem, b: &GElem) -> Result<Arc<Products>> {
        let da = self.engine.double_coset(a)?;
        let db = self.engine.double_coset(b)?;
        let cache_key = (da.key.clone(), db.key.clone());
        if let Some(cache) = &self.products {
            if let Some(p) = cache.read().expect("cache lock").get(&cache_key) {
                return Ok(p.clone());
            }
        }
        let pair = self.pair();
        // (χ_A * χ_B)(z) counts the pairs (i, j) with y_i b_j H = zH
        let mut hits: BTreeMap<String, (GElem, u64)> = BTreeMap::new();
        for y in &da.left_reps {
            for bj in &db.left_reps {
                let z = pair.canonical_left(&pair.mul(y, bj)?);
                hits.entry(z.to_string()).or_insert((z, 0)).1 += 1;
            }
        }
        let mut grouped: BTreeMap<String, (GElem, u64, Vec<u64>)> = BTreeMap::new();
        for (z, count) in hits.values() {
            let dz = self.engine.double_coset(z)?;
            let g = grouped
                .entry(dz.key.clone())
                .or_insert((dz.rep.clone(), dz.l, Vec::new()));
            g.2.push(*count);
        }
        let mut out = Vec::with_capacity(grouped.len());
        for (key, (rep, l, counts)) in grouped {
            if counts.len() as u64 != l || counts.iter().any(|c| *c != counts[0]) {
                return Err(Error::ActionNotWellDefined(format!(
                    "product counts over {key} are not constant on its {l} left cosets"
                )));
            }
            out.push((key, rep, Rat::int(counts[0])));
        }
        let out = Arc::new(out);
        if let Some(cache) = &self.products {
            cache
                .write()
                .expect("cache lock")
                .entry(cache_key)
                .or_insert_with(|| out.clone());
        }
        Ok(out)
    }

    /// `(f*g)(x) = Σ_{yH} f(y) g(y⁻¹x)`.
    pub fn convolve(&self, f: &HeckeElement, g: &HeckeElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for tf in f.terms.values() {
            for tg in g.terms.values() {
                let c = &tf.coeff * &tg.coeff;
                for (key, rep, k) in self.product_of_cosets(&tf.rep, &tg.rep)?.iter() {
                    out.add_term(key.clone(), rep, &(&c * k));
                }
            }
        }
        Ok(out)
    }

    /// `f*(x) = f(x⁻¹)Δ(x⁻¹)`; the term `c·χ_{HaH}` goes to `cΔ(a)·χ_{Ha⁻¹H}`.
    pub fn involution(&self, f: &HeckeElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for t in f.terms.values() {
            let inv = self.pair().inv(&t.rep)?;
            let c = &t.coeff * &self.engine.delta(&t.rep)?;
            let dc = self.engine.double_coset(&inv)?;
            out.add_term(dc.key.clone(), &dc.rep, &c);
        }
        Ok(out)
    }

    /// Parses `{"terms":[{"rep": .., "coeff": ..}]}`; representatives of the
    /// same double coset are merged.
    pub fn element_from_json(&self, v: &Value) -> Result<HeckeElement> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"terms\": [...]}".into()))?;
        let mut out = HeckeElement::zero();
        for t in terms {
            let rep = t
                .get("rep")
                .ok_or_else(|| Error::Parse("term without \"rep\"".into()))?;
            let rep = match rep {
                Value::String(s) => self.pair().parse_elem(s)?,
                other => self.pair().elem_from_json(other)?,
            };
            let coeff = match t.get("coeff") {
                None => Rat::one(),
                Some(Value::String(s)) => s.parse()?,
                Some(Value::Number(n)) => Rat::int(
                    n.as_i64()
                        .ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer")))?,
                ),
                Some(other) => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            out = out.add(&self.term(&rep, &coeff)?);
        }
        Ok(out)
    }
}
