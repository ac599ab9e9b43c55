//! Worked families: lower-triangular factorizations in `GL(2)`, units of real
//! quadratic orders, and the Heisenberg example.

mod gl2;
mod heisenberg;
mod quadratic;

pub use gl2::{
    certify_th_global, certify_th_p, slpm_surjectivity, th_decompose_global, th_decompose_p,
    SurjectivityReport, THDecomposition,
};
pub use heisenberg::{
    heis_conj_lattice, heis_orbit, heis_orbit_size, omega_membership, HeisConjLattice, HeisPoint,
    OmegaAnswer, ZResidue,
};
pub use quadratic::{fundamental_unit, unit_image_gap, unit_order_mod, QuadUnitData};
