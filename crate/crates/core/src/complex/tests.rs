use super::*;
use crate::random;
use crate::symbols::{integer, rational};

fn one_dim(arity: usize) -> Shape {
    Shape::new(1, arity)
}

#[test]
fn coboundary_of_square() {
    let shape = one_dim(1);
    let p = PolySymbol::p(shape, 0, 0).unwrap();
    let f = FormalSeries::from_orders(shape, true, [(1, p.pow(2))]).unwrap();
    let df = coboundary(&f).unwrap();
    let t = one_dim(2);
    let expected = (&PolySymbol::p(t, 0, 0).unwrap() * &PolySymbol::p(t, 1, 0).unwrap()).scale(&integer(-2));
    assert_eq!(df.coefficient(1), expected);
}

#[test]
fn coboundary_of_zero_and_ungraded() {
    let zero = FormalSeries::new(Shape::new(2, 2), true);
    assert!(coboundary(&zero).unwrap().is_zero());
    assert!(coboundary(&FormalSeries::new(Shape::new(2, 2), false)).is_err());
}

#[test]
fn coboundary_squares_to_zero() {
    let mut r = random::rng(21);
    for dim in 1..=2 {
        for arity in 1..=3 {
            let f = random::graded_series(&mut r, dim, arity, 3, 1, 4);
            let ddf = coboundary(&coboundary(&f).unwrap()).unwrap();
            assert!(ddf.is_zero(), "dim {dim} arity {arity}");
        }
    }
}

#[test]
fn coboundary_is_linear() {
    let mut r = random::rng(4);
    let f = random::graded_series(&mut r, 2, 2, 3, 1, 4);
    let g = random::graded_series(&mut r, 2, 2, 3, 1, 4);
    let (a, b) = (rational(3, 7), rational(-5, 2));
    let lhs = coboundary(&f.scale(&a).try_add(&g.scale(&b)).unwrap()).unwrap();
    let rhs = coboundary(&f)
        .unwrap()
        .scale(&a)
        .try_add(&coboundary(&g).unwrap().scale(&b))
        .unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn bracket_with_trivial_product_is_coboundary() {
    let mut r = random::rng(8);
    for arity in 1..=3 {
        let f = random::graded_series(&mut r, 2, arity, 3, 1, 3);
        let zero2 = FormalSeries::new(Shape::new(2, 2), true);
        assert_eq!(bracket(&zero2, &f, 3).unwrap(), coboundary(&f).unwrap(), "arity {arity}");
    }
}

#[test]
fn bracket_of_zeros() {
    let zero2 = FormalSeries::new(Shape::new(1, 2), true);
    assert!(bracket(&zero2, &zero2, 4).unwrap().is_zero());
}

#[test]
fn trivial_deformation_is_a_product() {
    let report = verify_product(&FormalSeries::new(Shape::new(2, 2), true), 5).unwrap();
    assert!(report.all_zero);
    assert_eq!(report.residuals.len(), 5);
}

fn symmetric_form(scale_by_x: bool) -> FormalSeries {
    let shape = Shape::new(2, 2);
    let mut f = PolySymbol::zero(shape);
    // A = [[1, 2], [2, -1]]
    for (k, l, c) in [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, -1)] {
        let term = &PolySymbol::p(shape, 0, k).unwrap() * &PolySymbol::p(shape, 1, l).unwrap();
        f.add_scaled(&term, &integer(c));
    }
    if scale_by_x {
        f = &f * &PolySymbol::x(shape, 0).unwrap();
    }
    FormalSeries::from_orders(shape, true, [(1, f)]).unwrap()
}

/// A constant bilinear form is the coboundary of `-½ pAp`, so it is a
/// product however it is symmetrized.
#[test]
fn constant_symmetric_form_is_a_product() {
    assert!(verify_product(&symmetric_form(false), 4).unwrap().all_zero);
}

#[test]
fn varying_symmetric_form_is_not_a_product() {
    let report = verify_product(&symmetric_form(true), 2).unwrap();
    let (order, _) = report.first_nonzero().expect("x-dependent symmetric part breaks associativity");
    assert!(order <= 2);
}

fn constant_poisson(dim: usize) -> FormalSeries {
    let shape = Shape::new(dim, 2);
    let term = &PolySymbol::p(shape, 0, 0).unwrap() * &PolySymbol::p(shape, 1, 1).unwrap();
    let swap = &PolySymbol::p(shape, 0, 1).unwrap() * &PolySymbol::p(shape, 1, 0).unwrap();
    let f = (&term - &swap).scale(&rational(1, 2));
    FormalSeries::from_orders(shape, true, [(1, f)]).unwrap()
}

#[test]
fn obstruction_low_orders() {
    let s = constant_poisson(2);
    assert!(obstruction(&s, 1).unwrap().h.is_zero());
    let h2 = obstruction(&s, 2).unwrap();
    assert!(h2.h.is_zero());
    assert!(h2.closed);
}

#[test]
fn obstruction_requires_product_below() {
    let mut r = random::rng(2);
    let s = random::graded_series(&mut r, 1, 2, 2, 1, 4);
    assert!(matches!(obstruction(&s, 3), Err(Error::NotAProduct { .. })));
}

/// Residual at order `n` splits as `dS_n + H_n` for any series.
#[test]
fn residual_splits_into_coboundary_and_obstruction() {
    let mut r = random::rng(13);
    let s = random::graded_series(&mut r, 1, 2, 3, 1, 3);
    let report = verify_product(&s, 3).unwrap();
    for n in 1..=3 {
        let ob = obstruction_unchecked(&s, n, &Limits::default()).unwrap();
        let expected = &coboundary_poly(&s.coefficient(n)) + &ob.h;
        assert_eq!(report.residuals[&n], expected, "order {n}");
    }
}

#[test]
fn signs_of_products() {
    assert_eq!(sign_of_product(-1, 1), -Rational::one());
    assert_eq!(sign_of_product(-1, -1), -Rational::one());
    assert_eq!(sign_of_product(-1, 2), Rational::one());
    assert_eq!(sign_of_product(2, 3), Rational::one());
}
