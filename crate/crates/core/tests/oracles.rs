mod common;

use common::{bch_degree, bracket_of, covectors, free_bch, pair_with_x, picard_compose};
use cotangent_operad::operad::compose_series;
use cotangent_operad::random;
use cotangent_operad::solver::{bch_generating_function, bch_terms, LieAlgebra};
use cotangent_operad::symbols::rational;
use cotangent_operad::{FormalSeries, Limits, PolySymbol, Shape};

fn assert_matches_picard(f: &FormalSeries, gs: &[&FormalSeries], n: usize) {
    let tree = compose_series(f, gs, n, &Limits::default()).unwrap();
    let oracle = picard_compose(f, gs, n);
    for (k, expected) in oracle.iter().enumerate() {
        assert_eq!(tree.coefficient(k + 1), *expected, "order {}", k + 1);
    }
}

#[test]
fn tree_expansion_matches_picard_iteration() {
    let mut r = random::rng(101);
    for case in 0..12 {
        let d = 1 + case % 2;
        let outer = 1 + case % 3;
        let f = random::graded_series(&mut r, d, outer, 2, 1, 2);
        let gs: Vec<FormalSeries> =
            (0..outer).map(|b| random::graded_series(&mut r, d, (case + b) % 3, 2, 1, 2)).collect();
        let refs: Vec<&FormalSeries> = gs.iter().collect();
        assert_matches_picard(&f, &refs, 3);
    }
}

#[test]
fn ungraded_data_matches_picard_iteration() {
    let mut r = random::rng(102);
    for _ in 0..6 {
        let shape = Shape::new(1, 1);
        let f = FormalSeries::from_orders(shape, false, [(1, random::polynomial(&mut r, shape, 3, 3))]).unwrap();
        let g = FormalSeries::from_orders(shape, false, [(1, random::polynomial(&mut r, shape, 3, 3))]).unwrap();
        assert_matches_picard(&f, &[&g], 4);
    }
}

/// `F = εf`, `G = εg` in arity 1: the ε² coefficient is `∇_p f · ∇_x g`
/// at `(p, x)`, with coefficient exactly one.
#[test]
fn second_order_cross_term() {
    let mut r = random::rng(103);
    for d in 1..=2 {
        let shape = Shape::new(d, 1);
        let f0 = random::homogeneous(&mut r, shape, 2, 2, 3);
        let g0 = random::homogeneous(&mut r, shape, 2, 2, 3);
        let f = FormalSeries::from_orders(shape, true, [(1, f0.clone())]).unwrap();
        let g = FormalSeries::from_orders(shape, true, [(1, g0.clone())]).unwrap();
        let mut taylor = PolySymbol::zero(shape);
        for i in 0..d {
            taylor = &taylor + &(&f0.partial(shape.p_var(0, i)) * &g0.partial(shape.x_var(i)));
        }
        let composed = compose_series(&f, &[&g], 2, &Limits::default()).unwrap();
        assert_eq!(composed.coefficient(2), taylor);
        assert_eq!(picard_compose(&f, &[&g], 2)[1], taylor);
    }
}

#[test]
fn bch_matches_free_algebra() {
    let free = free_bch(7);
    for lie in [LieAlgebra::heisenberg(), LieAlgebra::so3()] {
        let z = bch_terms(&lie, 7);
        for (m, zm) in z.iter().enumerate().skip(1) {
            assert_eq!(*zm, bch_degree(&lie, &free, m), "degree {m}");
        }
    }
}

#[test]
fn bch_low_orders() {
    for lie in [LieAlgebra::heisenberg(), LieAlgebra::so3()] {
        let s = bch_generating_function(&lie, 2).unwrap();
        let (p1, p2) = (covectors(3, 0), covectors(3, 1));
        let first: Vec<PolySymbol> = bracket_of(&lie, &p1, &p2).iter().map(|f| f.scale(&rational(1, 2))).collect();
        assert_eq!(s.coefficient(1), pair_with_x(&first));
        let a = bracket_of(&lie, &p1, &bracket_of(&lie, &p1, &p2));
        let b = bracket_of(&lie, &p2, &bracket_of(&lie, &p2, &p1));
        let second: Vec<PolySymbol> = a.iter().zip(&b).map(|(u, v)| (u + v).scale(&rational(1, 12))).collect();
        assert_eq!(s.coefficient(2), pair_with_x(&second));
    }
}
