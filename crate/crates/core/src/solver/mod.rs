//! Associative deformations from Poisson structures.

mod bch;
mod linear;
mod poisson;
mod solve;

pub use bch::{bch_generating_function, bch_generating_function_with, bch_terms, bernoulli_numbers, LieAlgebra};
pub use poisson::{jacobiator, validate_poisson, PoissonReport, PoissonStructure};
pub use solve::{first_order, solve_deformation, solve_deformation_with, Gauge};
