//! Seeded random symbols and series for property checks and the self test.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::symbols::{rational, FormalSeries, Monomial, PolySymbol, Shape};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in `[-4, 4]` and denominator in `[1, 3]`.
pub fn coefficient<R: Rng>(rng: &mut R) -> crate::Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-4i64..=4);
    }
    rational(n, rng.gen_range(1i64..=3))
}

fn scatter<R: Rng>(rng: &mut R, exps: &mut [u8], vars: &[usize], degree: usize) {
    for _ in 0..degree {
        let v = vars[rng.gen_range(0..vars.len())];
        exps[v] += 1;
    }
}

/// Random monomial with the given covector degree and base degree.
pub fn monomial<R: Rng>(rng: &mut R, shape: Shape, p_degree: usize, x_degree: usize) -> Monomial {
    let mut exps = vec![0u8; shape.var_count()];
    let p_vars: Vec<usize> = (0..shape.p_var_count()).collect();
    let x_vars: Vec<usize> = (0..shape.dim).map(|i| shape.x_var(i)).collect();
    if !p_vars.is_empty() {
        scatter(rng, &mut exps, &p_vars, p_degree);
    }
    scatter(rng, &mut exps, &x_vars, x_degree);
    Monomial::from_exponents(&exps)
}

/// Up to `terms` monomials homogeneous of degree `p_degree` in the
/// covectors, with base degree at most `max_x_degree`.
pub fn homogeneous<R: Rng>(rng: &mut R, shape: Shape, p_degree: usize, max_x_degree: usize, terms: usize) -> PolySymbol {
    if p_degree > 0 && shape.blocks == 0 {
        return PolySymbol::zero(shape);
    }
    let parts = (0..terms).map(|_| {
        let xd = rng.gen_range(0..=max_x_degree);
        (monomial(rng, shape, p_degree, xd), coefficient(rng))
    });
    let parts: Vec<_> = parts.collect();
    PolySymbol::from_terms(shape, parts).expect("monomials built for this shape")
}

/// Random polynomial of total degree at most `max_degree`, no grading.
pub fn polynomial<R: Rng>(rng: &mut R, shape: Shape, max_degree: usize, terms: usize) -> PolySymbol {
    let parts: Vec<_> = (0..terms)
        .map(|_| {
            let total = rng.gen_range(0..=max_degree);
            let pd = if shape.blocks == 0 { 0 } else { rng.gen_range(0..=total) };
            (monomial(rng, shape, pd, total - pd), coefficient(rng))
        })
        .collect();
    PolySymbol::from_terms(shape, parts).expect("monomials built for this shape")
}

/// Graded series with orders `1..=max_order`, each with up to `terms` terms.
pub fn graded_series<R: Rng>(
    rng: &mut R,
    dim: usize,
    arity: usize,
    max_order: usize,
    max_x_degree: usize,
    terms: usize,
) -> FormalSeries {
    let shape = Shape::new(dim, arity);
    let mut s = FormalSeries::new(shape, true);
    for i in 1..=max_order {
        let f = homogeneous(rng, shape, i + 1, max_x_degree, terms);
        s.set_order(i, f).expect("homogeneous of the right degree");
    }
    s
}

/// Arity-1 graded series supported on the single even order `order`, hence
/// odd in the covector.
pub fn odd_morphism<R: Rng>(rng: &mut R, dim: usize, order: usize, max_x_degree: usize, terms: usize) -> FormalSeries {
    assert!(order.is_multiple_of(2), "odd covector degree needs an even order");
    let shape = Shape::new(dim, 1);
    let mut s = FormalSeries::new(shape, true);
    s.set_order(order, homogeneous(rng, shape, order + 1, max_x_degree, terms))
        .expect("homogeneous of the right degree");
    s
}
