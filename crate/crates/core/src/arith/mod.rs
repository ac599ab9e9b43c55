//! Exact arithmetic: rationals, 2×2 matrices, lattices in ℚ², residue rings
//! and the quadratic rings ℤ[√d].

pub mod lattice;
pub mod mat2;
pub mod quad;
pub mod rat;
pub mod residue;
pub mod valuation;

pub use lattice::{hnf, lattice_index, lattice_intersect, lattice_sum, smith_invariants, transform_lattice, Lattice};
pub use mat2::{vec2, Mat2, Vec2};
pub use quad::{quad_pow_mod, QuadInt};
pub use rat::Rat;
pub use residue::{MatGroupMod, ResMat, ResidueRing};
pub use valuation::{val_p, Valuation};
