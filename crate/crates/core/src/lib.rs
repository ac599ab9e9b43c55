pub mod arith;
pub mod cli;
pub mod cosets;
pub mod error;
pub mod families;
pub mod grouppair;
pub mod report;
pub mod tower;

pub use error::{Error, Result};
