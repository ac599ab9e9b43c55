//! JSON pair configuration:
//! `{"family", "base_ring", "p", "Q_kind", "d", "M_basis", "R_generators"}`
//! plus an optional `"bounds"` object.

use serde::Deserialize;
use serde_json::Value;

use super::descriptor::{BaseRing, Bounds, Family, PairDescriptor, QKind};
use crate::arith::{Lattice, Mat2};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: String,
    #[serde(default)]
    base_ring: Option<String>,
    #[serde(default)]
    p: Option<u64>,
    #[serde(rename = "Q_kind", default)]
    q_kind: Option<String>,
    #[serde(default)]
    d: Option<i64>,
    #[serde(rename = "M_basis", default)]
    m_basis: Option<Value>,
    #[serde(rename = "R_generators", default)]
    r_generators: Option<Vec<Value>>,
    #[serde(default)]
    bounds: Option<Value>,
}

fn parse_matrix(field: &str, v: &Value) -> Result<Mat2> {
    match v {
        Value::String(s) => s.parse().map_err(|e: Error| Error::config(field, e.to_string())),
        other => serde_json::from_value(other.clone()).map_err(|e| Error::config(field, e.to_string())),
    }
}

/// Builds a descriptor from a JSON configuration string.
pub fn pair_from_json(text: &str) -> Result<PairDescriptor> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::config("<json>", e.to_string()))?;
    let family = match raw.family.to_ascii_lowercase().as_str() {
        "planar" => Family::Planar,
        "heisenberg" => Family::Heisenberg,
        other => return Err(Error::config("family", format!("unknown family {other:?}"))),
    };
    let base_ring = match raw.base_ring.as_deref().unwrap_or("Q") {
        "Q" | "QQ" | "rationals" => BaseRing::Rationals,
        "Z[1/p]" | "ZinvP" => match raw.p {
            Some(p) => BaseRing::ZInvP(p),
            None => return Err(Error::config("p", "Z[1/p] needs a prime p")),
        },
        other => {
            return Err(Error::config("base_ring", format!("expected \"Q\" or \"Z[1/p]\", got {other:?}")))
        }
    };
    let default_kind = match family {
        Family::Planar => "FullGL2",
        Family::Heisenberg => "Unipotent",
    };
    let q_kind = match raw.q_kind.as_deref().unwrap_or(default_kind) {
        "FullGL2" => QKind::FullGL2,
        "Unipotent" => QKind::Unipotent,
        "QuadTorus" => match raw.d {
            Some(d) => QKind::QuadTorus(d),
            None => return Err(Error::config("d", "QuadTorus needs the parameter d")),
        },
        other => return Err(Error::config("Q_kind", format!("unknown kind {other:?}"))),
    };
    let mut pair = PairDescriptor::new(family, base_ring, q_kind).map_err(|e| match e {
        Error::NotPrime(p) => Error::config("p", format!("{p} is not prime")),
        Error::BadDiscriminant { d, reason } => Error::config("d", format!("d = {d}: {reason}")),
        other => other,
    })?;
    if let Some(basis) = &raw.m_basis {
        let b = parse_matrix("M_basis", basis)?;
        let lattice = Lattice::hnf(&b).map_err(|e| Error::config("M_basis", e.to_string()))?;
        if lattice != Lattice::standard() {
            return Err(Error::config("M_basis", "only M = Z^2 is supported"));
        }
    }
    if let Some(gens) = &raw.r_generators {
        let gens = gens
            .iter()
            .map(|g| parse_matrix("R_generators", g))
            .collect::<Result<Vec<_>>>()?;
        pair = pair.with_r_generators(gens)?;
    }
    if let Some(b) = raw.bounds {
        let bounds: Bounds =
            serde_json::from_value(b).map_err(|e| Error::config("bounds", e.to_string()))?;
        if bounds.coset_enum_max == 0
            || bounds.conductor_max == 0
            || bounds.stage_order_max == 0
            || bounds.residue_group_max == 0
        {
            return Err(Error::config("bounds", "all bounds must be positive"));
        }
        pair = pair.with_bounds(bounds);
    }
    Ok(pair)
}
