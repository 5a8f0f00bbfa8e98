//! Shared fixtures for the benchmarks.

use cotangent_operad::random;
use cotangent_operad::solver::{first_order, PoissonStructure};
use cotangent_operad::symbols::integer;
use cotangent_operad::{FormalSeries, Shape};

/// `½ p₁αp₂` for the symplectic plane.
pub fn constant_product() -> FormalSeries {
    let alpha = PoissonStructure::constant(2, &[(0, 1, integer(1))]).expect("valid entry");
    FormalSeries::from_orders(Shape::new(2, 2), true, [(1, first_order(&alpha))]).expect("graded")
}

/// A seeded outer function of arity 2 and two inner functions of arity 1.
pub fn composition_inputs(dim: usize, seed: u64) -> (FormalSeries, Vec<FormalSeries>) {
    let mut r = random::rng(seed);
    let f = random::graded_series(&mut r, dim, 2, 3, 1, 3);
    let gs = (0..2).map(|_| random::graded_series(&mut r, dim, 1, 3, 1, 3)).collect();
    (f, gs)
}
