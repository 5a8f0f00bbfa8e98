//! The deformation complex: coboundary, insertion and bracket, product
//! residuals and obstructions.
//!
//! The insertion `F∘G = Σ_i (−1)^{(i−1)(l−1)} F(I, …, G, …, I)` takes the
//! deformation part of each full composition `S_0 + F` with `S_0 + G` in slot
//! `i`. With these signs `[0_2, F] = dF`, where `0_2` is the trivial product.

use std::collections::BTreeMap;

use num_traits::One;

use crate::config::Limits;
use crate::operad::compose_series;
use crate::symbols::{FormalSeries, PolySymbol, Rational, Shape};
use crate::{Error, Result};

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// `(−1)^{a·b}` for possibly negative `a`, `b`.
fn sign_of_product(a: i64, b: i64) -> Rational {
    sign((a * b).rem_euclid(2) == 1)
}

/// `dF` for a single symbol of arity `n`, as a symbol of arity `n + 1`.
pub fn coboundary_poly(f: &PolySymbol) -> PolySymbol {
    let shape = f.shape();
    let n = shape.blocks;
    let d = shape.dim;
    let target = Shape::new(d, n + 1);
    let p = |b: usize, i: usize| PolySymbol::variable(target, target.p_var(b, i));
    let with_blocks = |block_image: &dyn Fn(usize, usize) -> PolySymbol| -> PolySymbol {
        let mut images = Vec::with_capacity(shape.var_count());
        for b in 0..n {
            for i in 0..d {
                images.push(block_image(b, i));
            }
        }
        for i in 0..d {
            images.push(PolySymbol::variable(target, target.x_var(i)));
        }
        f.substitute(&images, target).expect("images built for the target shape")
    };
    let mut out = with_blocks(&|b, i| p(b, i));
    for j in 1..=n {
        let merged = with_blocks(&|b, i| {
            if b + 1 < j {
                p(b, i)
            } else if b + 1 == j {
                &p(b, i) + &p(b + 1, i)
            } else {
                p(b + 1, i)
            }
        });
        out.add_scaled(&merged, &sign((n + j - 1) % 2 == 1));
    }
    let shifted = with_blocks(&|b, i| p(b + 1, i));
    out.add_scaled(&shifted, &sign(n.is_multiple_of(2)));
    out
}

/// `dF(p_1, …, p_{n+1}, x) = F(p_1, …, p_n, x)
///   + Σ_j (−1)^{n+j−1} F(…, p_j + p_{j+1}, …, x) + (−1)^{n−1} F(p_2, …, p_{n+1}, x)`.
pub fn coboundary(f: &FormalSeries) -> Result<FormalSeries> {
    if !f.is_graded() {
        return Err(Error::Ungraded("coboundary needs a graded series".into()));
    }
    let target = Shape::new(f.dim(), f.arity() + 1);
    FormalSeries::from_orders(target, true, f.orders().map(|(i, g)| (i, coboundary_poly(g))))
}

/// `F∘G` for `F` of arity `k ≥ 1` and `G` of arity `l`, of arity `k + l − 1`.
pub fn circ(f: &FormalSeries, g: &FormalSeries, truncation: usize) -> Result<FormalSeries> {
    circ_with(f, g, truncation, &Limits::default())
}

pub fn circ_with(f: &FormalSeries, g: &FormalSeries, truncation: usize, limits: &Limits) -> Result<FormalSeries> {
    let (k, l) = (f.arity(), g.arity());
    if k == 0 {
        return Err(Error::ArityMismatch("cannot insert into an arity-0 function".into()));
    }
    if f.dim() != g.dim() {
        return Err(Error::ShapeMismatch(format!("dims {} and {}", f.dim(), g.dim())));
    }
    for s in [f, g] {
        if !s.is_graded() {
            return Err(Error::Ungraded("insertion needs graded series".into()));
        }
    }
    let identity = FormalSeries::new(Shape::new(f.dim(), 1), true);
    let mut out = FormalSeries::new(Shape::new(f.dim(), k + l - 1), true);
    for i in 1..=k {
        let inner: Vec<&FormalSeries> = (1..=k).map(|s| if s == i { g } else { &identity }).collect();
        let term = compose_series(f, &inner, truncation, limits)?;
        let signed = term.scale(&sign_of_product(i as i64 - 1, l as i64 - 1));
        out = out.try_add(&signed)?;
    }
    Ok(out)
}

/// `[F, G] = F∘G − (−1)^{(k−1)(l−1)} G∘F`.
pub fn bracket(f: &FormalSeries, g: &FormalSeries, truncation: usize) -> Result<FormalSeries> {
    bracket_with(f, g, truncation, &Limits::default())
}

pub fn bracket_with(f: &FormalSeries, g: &FormalSeries, truncation: usize, limits: &Limits) -> Result<FormalSeries> {
    let (k, l) = (f.arity() as i64, g.arity() as i64);
    let fg = circ_with(f, g, truncation, limits)?;
    let gf = circ_with(g, f, truncation, limits)?;
    fg.try_sub(&gf.scale(&sign_of_product(k - 1, l - 1)))
}

/// Per-order residuals of the product equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainReport {
    /// Residual at each order `1..=max_order`, zero entries included.
    pub residuals: BTreeMap<usize, PolySymbol>,
    pub all_zero: bool,
    pub max_order: usize,
}

impl CochainReport {
    fn new(series: &FormalSeries, max_order: usize) -> CochainReport {
        let residuals: BTreeMap<usize, PolySymbol> = (1..=max_order).map(|i| (i, series.coefficient(i))).collect();
        let all_zero = residuals.values().all(PolySymbol::is_zero);
        CochainReport {
            residuals,
            all_zero,
            max_order,
        }
    }

    pub fn first_nonzero(&self) -> Option<(usize, &PolySymbol)> {
        self.residuals.iter().find(|(_, r)| !r.is_zero()).map(|(&i, r)| (i, r))
    }
}

fn check_arity_two(s: &FormalSeries) -> Result<()> {
    if s.arity() != 2 {
        return Err(Error::ArityMismatch(format!("expected arity 2, got {}", s.arity())));
    }
    if !s.is_graded() {
        return Err(Error::Ungraded("product checks need a graded series".into()));
    }
    Ok(())
}

/// Residuals of `S(S, I) − S(I, S)` for `S = S_0^2 + S̃` up to `order`.
pub fn verify_product(s: &FormalSeries, order: usize) -> Result<CochainReport> {
    verify_product_with(s, order, &Limits::default())
}

pub fn verify_product_with(s: &FormalSeries, order: usize, limits: &Limits) -> Result<CochainReport> {
    check_arity_two(s)?;
    let identity = FormalSeries::new(Shape::new(s.dim(), 1), true);
    let left = compose_series(s, &[s, &identity], order, limits)?;
    let right = compose_series(s, &[&identity, s], order, limits)?;
    Ok(CochainReport::new(&left.try_sub(&right)?, order))
}

/// The order-`n` obstruction `H_n` together with its closedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub order: usize,
    pub h: PolySymbol,
    /// Whether `d H_n = 0`.
    pub closed: bool,
}

/// `H_n`, the `ε^n` coefficient of `½[S̃_{<n}, S̃_{<n}]`. The lower orders
/// must already form a product through order `n − 1`.
pub fn obstruction(partial: &FormalSeries, n: usize) -> Result<Obstruction> {
    obstruction_with(partial, n, &Limits::default())
}

pub fn obstruction_with(partial: &FormalSeries, n: usize, limits: &Limits) -> Result<Obstruction> {
    check_arity_two(partial)?;
    let lower = partial.below(n);
    if n > 1 {
        let report = verify_product_with(&lower, n - 1, limits)?;
        if let Some((order, _)) = report.first_nonzero() {
            return Err(Error::NotAProduct { order });
        }
    }
    obstruction_unchecked(&lower, n, limits)
}

pub(crate) fn obstruction_unchecked(lower: &FormalSeries, n: usize, limits: &Limits) -> Result<Obstruction> {
    let lower = lower.below(n);
    let h = if lower.is_zero() {
        PolySymbol::zero(Shape::new(lower.dim(), 3))
    } else {
        bracket_with(&lower, &lower, n, limits)?
            .coefficient(n)
            .scale(&Rational::new(1.into(), 2.into()))
    };
    let closed = coboundary_poly(&h).is_zero();
    Ok(Obstruction { order: n, h, closed })
}

#[cfg(test)]
mod tests;
