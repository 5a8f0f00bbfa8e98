//! Exact computations in the formal cotangent Lagrangian operad.

pub mod complex;
pub mod config;
pub mod elementary;
pub mod groupoid;
pub mod operad;
mod error;
pub mod random;
pub mod solver;
pub mod symbols;
pub mod trees;

pub use config::Limits;
pub use error::{Error, Result};
pub use groupoid::{SgsReport, StructureMaps};
pub use operad::GenFunction;
pub use solver::{LieAlgebra, PoissonStructure};
pub use symbols::{FormalSeries, PolySymbol, Rational, Shape};
