//! Sparse polynomial symbols over exact rationals and ε-graded series of them.

pub(crate) mod contract;
pub mod json;
mod poly;
mod series;

pub use poly::{integer, rational, ContractSlot, Monomial, PolySymbol, Rational, Shape};
pub use series::{BlockFlattening, FormalSeries, GradingReport, GradingViolation};
