//! Double cosets `HxH`, their degrees, and the Hecke algebra of a pair.

mod double_coset;
mod hecke;

pub use double_coset::{CosetEngine, DoubleCoset};
pub use hecke::{HeckeAlgebra, HeckeElement, Term};
