//! Symplectic groupoid conditions, Poisson extraction, structure maps and
//! equivalence transformations.

use std::fmt;

use crate::config::Limits;
use crate::operad::numeric::CompiledSeries;
use crate::operad::{compose_series, NumericOptions};
use crate::solver::{validate_poisson, PoissonStructure};
use crate::symbols::{integer, FormalSeries, PolySymbol, Shape};
use crate::{Error, Result};

#[cfg(test)]
mod tests;

/// The three substitutions that make an associative `S̃` a groupoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SgsCondition {
    /// `S̃(p, 0, x) = 0`
    RightUnit,
    /// `S̃(0, p, x) = 0`
    LeftUnit,
    /// `S̃(p, −p, x) = 0`
    Inverse,
}

impl fmt::Display for SgsCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SgsCondition::RightUnit => "S(p,0,x)",
            SgsCondition::LeftUnit => "S(0,p,x)",
            SgsCondition::Inverse => "S(p,-p,x)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgsViolation {
    pub order: usize,
    pub condition: SgsCondition,
    pub residual: PolySymbol,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SgsReport {
    pub violations: Vec<SgsViolation>,
}

impl SgsReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SgsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return f.write_str("SGS conditions hold");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "order {}: {} = {}", v.order, v.condition, v.residual)?;
        }
        Ok(())
    }
}

/// Images of the variables of `Shape(d, 2)` in `Shape(d, 1)` with the two
/// covectors replaced by `a·p` and `b·p`.
fn pair_images(d: usize, a: i64, b: i64) -> Vec<PolySymbol> {
    let target = Shape::new(d, 1);
    let p = |i| PolySymbol::variable(target, target.p_var(0, i));
    let mut images: Vec<PolySymbol> = (0..d).map(|i| p(i).scale(&integer(a))).collect();
    images.extend((0..d).map(|i| p(i).scale(&integer(b))));
    images.extend((0..d).map(|i| PolySymbol::variable(target, target.x_var(i))));
    images
}

fn require_pair(s: &FormalSeries) -> Result<()> {
    if s.arity() != 2 {
        return Err(Error::ArityMismatch(format!("expected arity 2, got {}", s.arity())));
    }
    Ok(())
}

/// Checks the SGS substitutions exactly at every order up to `order`.
pub fn check_sgs(s: &FormalSeries, order: usize) -> Result<SgsReport> {
    require_pair(s)?;
    if !s.is_graded() {
        return Err(Error::Ungraded("check_sgs needs a graded series".into()));
    }
    let d = s.dim();
    let target = Shape::new(d, 1);
    let conditions = [
        (SgsCondition::RightUnit, pair_images(d, 1, 0)),
        (SgsCondition::LeftUnit, pair_images(d, 0, 1)),
        (SgsCondition::Inverse, pair_images(d, 1, -1)),
    ];
    let mut report = SgsReport::default();
    for (n, f) in s.orders().filter(|&(n, _)| n <= order) {
        for (condition, images) in &conditions {
            let residual = f.substitute(images, target)?;
            if !residual.is_zero() {
                report.violations.push(SgsViolation {
                    order: n,
                    condition: *condition,
                    residual,
                });
            }
        }
    }
    Ok(report)
}

/// `α^{kl}(x) = 2 ∂²S̃^{(1)}/∂p₁_k∂p₂_l` at `p = 0`.
pub fn extract_poisson(s: &FormalSeries) -> Result<PoissonStructure> {
    require_pair(s)?;
    let d = s.dim();
    let shape = s.shape();
    let base = Shape::new(d, 0);
    let mut images = vec![PolySymbol::zero(base); 2 * d];
    images.extend((0..d).map(|i| PolySymbol::variable(base, base.x_var(i))));
    let first = s.coefficient(1);
    let two = integer(2);
    let mut matrix = vec![vec![PolySymbol::zero(base); d]; d];
    for (k, row) in matrix.iter_mut().enumerate() {
        let dk = first.partial(shape.p_var(0, k));
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = dk.partial(shape.p_var(1, l)).substitute(&images, base)?.scale(&two);
        }
    }
    let alpha = PoissonStructure::from_matrix(matrix)?;
    if let Some((i, j)) = validate_poisson(&alpha).antisymmetry_failure {
        return Err(Error::NotAntisymmetric { i, j });
    }
    Ok(alpha)
}

/// Source and target maps as ε-series over `Shape(d, 1)`. The `x` term at
/// `ε⁰` is implicit: `s_k = x_k + Σ εⁿ source[k]⁽ⁿ⁾`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMaps {
    pub source: Vec<FormalSeries>,
    pub target: Vec<FormalSeries>,
}

impl StructureMaps {
    pub fn dim(&self) -> usize {
        self.source.len()
    }

    /// `(p, x) ↦ (0, x)`.
    pub fn unit(&self, p: &[f64], x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; p.len()], x.to_vec())
    }

    /// `(p, x) ↦ (−p, x)`.
    pub fn inverse(&self, p: &[f64], x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (p.iter().map(|v| -v).collect(), x.to_vec())
    }

    pub fn source_at(&self, p: &[f64], x: &[f64], eps: f64) -> Vec<f64> {
        eval_map(&self.source, p, x, eps)
    }

    pub fn target_at(&self, p: &[f64], x: &[f64], eps: f64) -> Vec<f64> {
        eval_map(&self.target, p, x, eps)
    }
}

fn eval_map(components: &[FormalSeries], p: &[f64], x: &[f64], eps: f64) -> Vec<f64> {
    let at: Vec<f64> = p.iter().chain(x).copied().collect();
    components
        .iter()
        .zip(x)
        .map(|(c, xk)| xk + CompiledSeries::new(c, eps).value(&at))
        .collect()
}

/// `s = x + ∇_{p₂}S̃(p, 0, x)`, `t = x + ∇_{p₁}S̃(0, p, x)`.
pub fn structure_maps(s: &FormalSeries, order: usize) -> Result<StructureMaps> {
    let report = check_sgs(s, order)?;
    if !report.passes() {
        return Err(Error::SgsFailure(report.to_string()));
    }
    let d = s.dim();
    let shape = s.shape();
    let target_shape = Shape::new(d, 1);
    let at_first = pair_images(d, 1, 0);
    let at_second = pair_images(d, 0, 1);
    let component = |block: usize, images: &[PolySymbol], k: usize| -> Result<FormalSeries> {
        let mut out = FormalSeries::new(target_shape, false);
        for (n, f) in s.orders().filter(|&(n, _)| n <= order) {
            let g = f.partial(shape.p_var(block, k)).substitute(images, target_shape)?;
            if !g.is_zero() {
                out.insert_unchecked(n, g);
            }
        }
        Ok(out)
    };
    Ok(StructureMaps {
        source: (0..d).map(|k| component(1, &at_first, k)).collect::<Result<_>>()?,
        target: (0..d).map(|k| component(0, &at_second, k)).collect::<Result<_>>()?,
    })
}

fn require_morphism(f: &FormalSeries) -> Result<()> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch(format!("expected arity 1, got {}", f.arity())));
    }
    if !f.is_graded() {
        return Err(Error::Ungraded("morphisms must be graded".into()));
    }
    Ok(())
}

/// `G̃` with `F(G) = I` to the given order.
pub fn invert_morphism(f: &FormalSeries, order: usize) -> Result<FormalSeries> {
    invert_morphism_with(f, order, &Limits::default())
}

pub fn invert_morphism_with(f: &FormalSeries, order: usize, limits: &Limits) -> Result<FormalSeries> {
    require_morphism(f)?;
    limits.check_truncation(order)?;
    let mut g = FormalSeries::new(f.shape(), true);
    for n in 1..=order {
        let c = compose_series(f, &[&g], n, limits)?.coefficient(n);
        if !c.is_zero() {
            g.set_order(n, -c)?;
        }
    }
    Ok(g)
}

/// `F(S)(F⁻¹, F⁻¹)`.
pub fn transform_product(s: &FormalSeries, f: &FormalSeries, order: usize) -> Result<FormalSeries> {
    transform_product_with(s, f, order, &Limits::default())
}

pub fn transform_product_with(s: &FormalSeries, f: &FormalSeries, order: usize, limits: &Limits) -> Result<FormalSeries> {
    require_pair(s)?;
    require_morphism(f)?;
    let finv = invert_morphism_with(f, order, limits)?;
    let outer = compose_series(f, &[s], order, limits)?;
    compose_series(&outer, &[&finv, &finv], order, limits)
}

/// Solves `x₁ = x₂ + ∇_pF̃(p₁, x₂)` for `x₂` by fixed-point iteration and
/// returns `(p₂, x₂)` with `p₂ = p₁ + ∇_xF̃(p₁, x₂)`.
pub fn psi_numeric(f: &FormalSeries, p1: &[f64], x1: &[f64], eps: f64, opts: &NumericOptions) -> Result<(Vec<f64>, Vec<f64>)> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch(format!("expected arity 1, got {}", f.arity())));
    }
    let d = f.dim();
    if p1.len() != d || x1.len() != d {
        return Err(Error::ShapeMismatch(format!("point must have {d} + {d} coordinates")));
    }
    if eps.abs() > opts.max_eps {
        return Err(Error::OutOfRange(format!("|eps| = {} exceeds {}", eps.abs(), opts.max_eps)));
    }
    if p1.iter().chain(x1).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let shape = f.shape();
    let fc = CompiledSeries::new(f, eps);
    let mut at: Vec<f64> = p1.iter().chain(x1).copied().collect();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut change: f64 = 0.0;
        for i in 0..d {
            let next = x1[i] - fc.partial(shape.p_var(0, i), &at);
            change = change.max((next - at[shape.x_var(i)]).abs());
            at[shape.x_var(i)] = next;
        }
        if !change.is_finite() {
            return Err(Error::NonFinite);
        }
        if change <= opts.tol {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                residual: change,
            });
        }
    }
    let p2 = (0..d).map(|i| p1[i] + fc.partial(shape.x_var(i), &at)).collect();
    let x2 = at[d..].to_vec();
    Ok((p2, x2))
}

/// Largest entry of `J Ω Jᵀ − Ω` for the central-difference Jacobian of
/// `ψ` at `(p, x)`, coordinates ordered `(p, x)`.
pub fn symplectic_defect(
    f: &FormalSeries,
    p: &[f64],
    x: &[f64],
    eps: f64,
    step: f64,
    opts: &NumericOptions,
) -> Result<f64> {
    let d = p.len();
    let n = 2 * d;
    let base: Vec<f64> = p.iter().chain(x).copied().collect();
    let eval = |z: &[f64]| -> Result<Vec<f64>> {
        let (p2, x2) = psi_numeric(f, &z[..d], &z[d..], eps, opts)?;
        Ok(p2.into_iter().chain(x2).collect())
    };
    // jac[r][c] = ∂ψ_r/∂z_c
    let mut jac = vec![vec![0.0; n]; n];
    for c in 0..n {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus[c] += step;
        minus[c] -= step;
        let (fp, fm) = (eval(&plus)?, eval(&minus)?);
        for r in 0..n {
            jac[r][c] = (fp[r] - fm[r]) / (2.0 * step);
        }
    }
    let omega = |r: usize, c: usize| -> f64 {
        if r < d && c == r + d {
            1.0
        } else if r >= d && c + d == r {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let mut v = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let w = omega(a, b);
                    if w != 0.0 {
                        v += jac[r][a] * w * jac[c][b];
                    }
                }
            }
            worst = worst.max((v - omega(r, c)).abs());
        }
    }
    Ok(worst)
}
