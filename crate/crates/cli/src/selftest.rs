use cotangent_operad::complex::{bracket, coboundary, verify_product};
use cotangent_operad::groupoid::{check_sgs, extract_poisson, invert_morphism, symplectic_defect, transform_product};
use cotangent_operad::operad::{compose_series, NumericOptions};
use cotangent_operad::random;
use cotangent_operad::solver::{bch_generating_function, first_order, solve_deformation, Gauge, LieAlgebra, PoissonStructure};
use cotangent_operad::symbols::integer;
use cotangent_operad::trees::enumerate_unrooted;
use cotangent_operad::{FormalSeries, Limits, Shape};

use crate::{Failure, Outcome};

type Check = fn(u64) -> Result<bool, cotangent_operad::Error>;

fn symmetry(_: u64) -> Result<bool, cotangent_operad::Error> {
    for t in enumerate_unrooted(5)? {
        if t.symmetry_coefficient() != t.automorphism_count()? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn complex(seed: u64) -> Result<bool, cotangent_operad::Error> {
    let mut r = random::rng(seed);
    for arity in 1..=3 {
        let f = random::graded_series(&mut r, 2, arity, 2, 1, 3);
        let df = coboundary(&f)?;
        let zero = FormalSeries::new(Shape::new(2, 2), true);
        if !coboundary(&df)?.is_zero() || bracket(&zero, &f, 2)? != df.truncate(2) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unit_law(seed: u64) -> Result<bool, cotangent_operad::Error> {
    let mut r = random::rng(seed);
    let id = FormalSeries::new(Shape::new(2, 1), true);
    for arity in 0..=3 {
        let f = random::graded_series(&mut r, 2, arity, 3, 1, 3);
        if compose_series(&f, &vec![&id; arity], 3, &Limits::default())? != f.truncate(3) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn constant_product(_: u64) -> Result<bool, cotangent_operad::Error> {
    let alpha = PoissonStructure::constant(2, &[(0, 1, integer(1))])?;
    let s = FormalSeries::from_orders(Shape::new(2, 2), true, [(1, first_order(&alpha))])?;
    Ok(verify_product(&s, 6)?.all_zero && check_sgs(&s, 6)?.passes())
}

fn linear_products(_: u64) -> Result<bool, cotangent_operad::Error> {
    let lie = LieAlgebra::heisenberg();
    let bch = bch_generating_function(&lie, 4)?;
    let solved = solve_deformation(&lie.poisson(), 4, Gauge::SgsConstrained)?;
    Ok([&bch, &solved]
        .iter()
        .all(|s| verify_product(s, 4).map(|r| r.all_zero).unwrap_or(false))
        && extract_poisson(&solved)? == lie.poisson())
}

fn equivalence(seed: u64) -> Result<bool, cotangent_operad::Error> {
    let mut r = random::rng(seed);
    let alpha = PoissonStructure::constant(2, &[(0, 1, integer(1))])?;
    let s = FormalSeries::from_orders(Shape::new(2, 2), true, [(1, first_order(&alpha))])?;
    let f = random::odd_morphism(&mut r, 2, 2, 1, 2);
    let t = transform_product(&s, &f, 4)?;
    let g = invert_morphism(&f, 4)?;
    Ok(verify_product(&t, 4)?.all_zero
        && extract_poisson(&t)? == alpha
        && compose_series(&f, &[&g], 4, &Limits::default())?.is_zero())
}

fn symplectic(seed: u64) -> Result<bool, cotangent_operad::Error> {
    let mut r = random::rng(seed);
    let f = random::graded_series(&mut r, 2, 1, 3, 2, 3);
    let defect = symplectic_defect(&f, &[0.3, -0.4], &[0.5, 0.1], 1e-2, 1e-5, &NumericOptions::default())?;
    Ok(defect <= 1e-6)
}

pub(crate) fn run(seed: u64) -> Outcome {
    let checks: [(&str, Check); 7] = [
        ("tree symmetry", symmetry),
        ("coboundary", complex),
        ("unit law", unit_law),
        ("constant Poisson product", constant_product),
        ("linear Poisson products", linear_products),
        ("equivalence", equivalence),
        ("symplecticity", symplectic),
    ];
    let mut failed = Vec::new();
    for (name, check) in checks {
        match check(seed) {
            Ok(true) => println!("ok\t{name}"),
            Ok(false) => {
                println!("FAILED\t{name}");
                failed.push(name);
            }
            Err(e) => {
                println!("FAILED\t{name}: {e}");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} check(s) failed: {}", failed.len(), failed.join(", "))))
    }
}
