//! Semidirect products `G = N ⋊ Q` with subgroup `H = M ⋊ R`: elements,
//! membership, stabilizers and their indices, and verification predicates.

mod checks;
mod config;
mod descriptor;
mod stabilizers;

pub use checks::{
    DirectedPair, DownwardReport, FaithfulWitness, HeckeReport, IdentityReport, IndexEntry,
    PrefixIndices, ReducedReport,
};
pub(crate) use checks::is_bound_error;
pub use config::pair_from_json;
pub use descriptor::{BaseRing, Bounds, Family, GElem, PairDescriptor, QKind};
pub use stabilizers::{lcm_levels, StabDescriptor};
