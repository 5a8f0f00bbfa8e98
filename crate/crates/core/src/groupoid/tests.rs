use super::*;
use crate::random;
use crate::solver::first_order;
use crate::symbols::rational;

fn constant_alpha() -> PoissonStructure {
    PoissonStructure::constant(2, &[(0, 1, integer(1))]).unwrap()
}

fn product(f: PolySymbol) -> FormalSeries {
    FormalSeries::from_orders(f.shape(), true, [(1, f)]).unwrap()
}

#[test]
fn sgs_trivial_and_constant() {
    assert!(check_sgs(&FormalSeries::new(Shape::new(2, 2), true), 5).unwrap().passes());
    let s = product(first_order(&constant_alpha()));
    assert!(check_sgs(&s, 5).unwrap().passes());
}

#[test]
fn sgs_symmetric_fails_inverse_only() {
    let shape = Shape::new(2, 2);
    let p = |b, i| PolySymbol::p(shape, b, i).unwrap();
    let s = product(&(&p(0, 0) * &p(1, 0)) + &(&p(0, 1) * &p(1, 1)));
    let report = check_sgs(&s, 3).unwrap();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].condition, SgsCondition::Inverse);
    assert_eq!(report.violations[0].order, 1);
}

#[test]
fn sgs_requires_arity_two() {
    assert!(check_sgs(&FormalSeries::new(Shape::new(2, 1), true), 2).is_err());
}

#[test]
fn poisson_extraction() {
    let alpha = constant_alpha();
    assert_eq!(extract_poisson(&product(first_order(&alpha))).unwrap(), alpha);
    let zero = extract_poisson(&FormalSeries::new(Shape::new(3, 2), true)).unwrap();
    assert!(zero.is_zero());
    let shape = Shape::new(2, 2);
    let sym = product(&PolySymbol::p(shape, 0, 0).unwrap() * &PolySymbol::p(shape, 1, 0).unwrap());
    assert!(matches!(extract_poisson(&sym), Err(Error::NotAntisymmetric { i: 1, j: 1 })));
}

#[test]
fn structure_maps_constant() {
    assert!(structure_maps(&FormalSeries::new(Shape::new(2, 2), true), 3)
        .unwrap()
        .source
        .iter()
        .all(FormalSeries::is_zero));
    let maps = structure_maps(&product(first_order(&constant_alpha())), 3).unwrap();
    let shape = Shape::new(2, 1);
    let p = |i| PolySymbol::p(shape, 0, i).unwrap();
    let half = rational(1, 2);
    // source = x − ½αp, target = x + ½αp with (αp)_1 = p_2, (αp)_2 = −p_1
    assert_eq!(maps.source[0].coefficient(1), p(1).scale(&-half.clone()));
    assert_eq!(maps.source[1].coefficient(1), p(0).scale(&half));
    assert_eq!(maps.target[0].coefficient(1), p(1).scale(&half));
    assert_eq!(maps.target[1].coefficient(1), p(0).scale(&-half.clone()));
    let s = maps.source_at(&[0.2, 0.4], &[1.0, 2.0], 0.1);
    assert!((s[0] - (1.0 - 0.02)).abs() < 1e-15 && (s[1] - (2.0 + 0.01)).abs() < 1e-15);
    assert_eq!(maps.inverse(&[1.0, -2.0], &[3.0, 4.0]), (vec![-1.0, 2.0], vec![3.0, 4.0]));
    assert_eq!(maps.unit(&[1.0, -2.0], &[3.0, 4.0]), (vec![0.0, 0.0], vec![3.0, 4.0]));
}

#[test]
fn structure_maps_reject_non_sgs() {
    let shape = Shape::new(1, 2);
    let s = product(&PolySymbol::p(shape, 0, 0).unwrap() * &PolySymbol::p(shape, 1, 0).unwrap());
    assert!(matches!(structure_maps(&s, 2), Err(Error::SgsFailure(_))));
}

#[test]
fn inversion_first_order_and_zero() {
    let zero = FormalSeries::new(Shape::new(2, 1), true);
    assert!(invert_morphism(&zero, 4).unwrap().is_zero());
    let mut r = random::rng(11);
    let f = random::graded_series(&mut r, 2, 1, 1, 2, 3);
    let g = invert_morphism(&f, 1).unwrap();
    assert_eq!(g.coefficient(1), -f.coefficient(1));
}

#[test]
fn inversion_is_two_sided() {
    let mut r = random::rng(12);
    let f = random::graded_series(&mut r, 2, 1, 2, 1, 2);
    let g = invert_morphism(&f, 4).unwrap();
    let limits = Limits::default();
    assert!(compose_series(&f, &[&g], 4, &limits).unwrap().is_zero());
    assert!(compose_series(&g, &[&f], 4, &limits).unwrap().is_zero());
}

#[test]
fn odd_closure() {
    let mut r = random::rng(13);
    let f = random::odd_morphism(&mut r, 2, 2, 1, 2);
    let g = random::odd_morphism(&mut r, 2, 2, 1, 2);
    assert!(invert_morphism(&f, 6).unwrap().is_odd_in_p());
    assert!(compose_series(&f, &[&g], 6, &Limits::default()).unwrap().is_odd_in_p());
}

#[test]
fn trivial_transform() {
    let s = product(first_order(&constant_alpha()));
    let zero = FormalSeries::new(Shape::new(2, 1), true);
    assert_eq!(transform_product(&s, &zero, 4).unwrap(), s);
}

#[test]
fn psi_identity_and_base() {
    let opts = NumericOptions::default();
    let zero = FormalSeries::new(Shape::new(2, 1), true);
    let (p2, x2) = psi_numeric(&zero, &[0.3, -0.2], &[1.0, 0.5], 0.01, &opts).unwrap();
    assert_eq!((p2, x2), (vec![0.3, -0.2], vec![1.0, 0.5]));
    let mut r = random::rng(14);
    let f = random::graded_series(&mut r, 2, 1, 3, 2, 3);
    let (p2, x2) = psi_numeric(&f, &[0.0, 0.0], &[0.7, -0.4], 0.01, &opts).unwrap();
    assert_eq!(p2, vec![0.0, 0.0]);
    assert_eq!(x2, vec![0.7, -0.4]);
}

#[test]
fn psi_is_symplectic() {
    let mut r = random::rng(15);
    let f = random::graded_series(&mut r, 2, 1, 3, 2, 3);
    let defect = symplectic_defect(&f, &[0.5, -0.3], &[0.2, 0.9], 1e-2, 1e-5, &NumericOptions::default()).unwrap();
    assert!(defect < 1e-6, "{defect}");
}

/// `ψ_{F(G)} = ψ_F ∘ ψ_G`, where `F(G)` is `compose(F, [G])`.
#[test]
fn psi_composition_order() {
    let opts = NumericOptions::default();
    let mut r = random::rng(16);
    let f = random::graded_series(&mut r, 2, 1, 2, 2, 3);
    let g = random::graded_series(&mut r, 2, 1, 2, 2, 3);
    let fg = compose_series(&f, &[&g], 8, &Limits::default()).unwrap();
    let eps = 1e-2;
    let (p1, x1) = ([0.4, -0.6], [0.3, 0.8]);
    let (pg, xg) = psi_numeric(&g, &p1, &x1, eps, &opts).unwrap();
    let (pfg, xfg) = psi_numeric(&f, &pg, &xg, eps, &opts).unwrap();
    let (pf, xf) = psi_numeric(&f, &p1, &x1, eps, &opts).unwrap();
    let (pgf, xgf) = psi_numeric(&g, &pf, &xf, eps, &opts).unwrap();
    let (pc, xc) = psi_numeric(&fg, &p1, &x1, eps, &opts).unwrap();
    let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let f_after_g = gap(&pfg, &pc).max(gap(&xfg, &xc));
    let g_after_f = gap(&pgf, &pc).max(gap(&xgf, &xc));
    assert!(f_after_g < 1e-10, "ψ_F∘ψ_G off by {f_after_g}, ψ_G∘ψ_F off by {g_after_f}");
    assert!(g_after_f > 1e-6);
}
