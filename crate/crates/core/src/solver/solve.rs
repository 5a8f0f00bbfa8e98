use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::linear::{solve, Solution};
use super::poisson::{validate_poisson, PoissonStructure};
use crate::complex::{coboundary_poly, obstruction_unchecked, verify_product_with};
use crate::config::Limits;
use crate::groupoid::check_sgs;
use crate::symbols::{FormalSeries, Monomial, PolySymbol, Rational, Shape};
use crate::{Error, Result};

/// How the kernel of `d` is fixed at each order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Gauge {
    /// Solutions satisfy `S_n(p,0,x) = S_n(0,p,x) = S_n(p,−p,x) = 0`;
    /// remaining freedom is set to zero by the pivot order.
    #[default]
    SgsConstrained,
}

/// `S̃^{(1)} = ½ p₁·α(x)·p₂`.
pub fn first_order(alpha: &PoissonStructure) -> PolySymbol {
    let d = alpha.dim();
    let shape = Shape::new(d, 2);
    let mut s = PolySymbol::zero(shape);
    for k in 0..d {
        for l in 0..d {
            if alpha.entry(k, l).is_zero() {
                continue;
            }
            let pp = &PolySymbol::variable(shape, shape.p_var(0, k)) * &PolySymbol::variable(shape, shape.p_var(1, l));
            s.add_assign_ref(&(&pp * &alpha.entry_in(k, l, shape)));
        }
    }
    s.scale(&Rational::new(1.into(), 2.into()))
}

/// Builds an associative deformation with first order `½ p₁αp₂` by solving
/// `d S̃_n = −H_n` order by order.
pub fn solve_deformation(alpha: &PoissonStructure, order: usize, gauge: Gauge) -> Result<FormalSeries> {
    solve_deformation_with(alpha, order, gauge, &Limits::default())
}

pub fn solve_deformation_with(alpha: &PoissonStructure, order: usize, gauge: Gauge, limits: &Limits) -> Result<FormalSeries> {
    let Gauge::SgsConstrained = gauge;
    validate_poisson(alpha).into_result()?;
    limits.check_truncation(order)?;
    let d = alpha.dim();
    let shape = Shape::new(d, 2);
    let mut s = FormalSeries::new(shape, true);
    if order == 0 {
        return Ok(s);
    }
    s.set_order(1, first_order(alpha))?;
    let g = alpha.max_degree();
    for n in 2..=order {
        let ob = obstruction_unchecked(&s, n, limits)?;
        if ob.h.is_zero() {
            continue;
        }
        let s_n = solve_order(&ob.h, n, d)?;
        let bound = n * g + 1;
        if s_n.max_x_degree() > bound {
            return Err(Error::Infeasible {
                order: n,
                detail: format!("solution has base degree {} above the bound {bound}", s_n.max_x_degree()),
            });
        }
        s.set_order(n, s_n)?;
    }
    if let Some((first, _)) = verify_product_with(&s, order, limits)?.first_nonzero() {
        return Err(Error::NotAProduct { order: first });
    }
    let sgs = check_sgs(&s, order)?;
    if !sgs.passes() {
        return Err(Error::SgsFailure(sgs.to_string()));
    }
    Ok(s)
}

type Content = Vec<u8>;
type Beta = Vec<u8>;

/// Covector monomials of arity 2 with the given per-component content that
/// involve both blocks, with the degree of their second block.
fn mixed_basis(content: &[u8]) -> Vec<(Monomial, usize)> {
    let d = content.len();
    let mut out = Vec::new();
    let mut first = vec![0u8; d];
    loop {
        let deg_a: usize = first.iter().map(|&e| e as usize).sum();
        let deg_total: usize = content.iter().map(|&e| e as usize).sum();
        if deg_a > 0 && deg_a < deg_total {
            let mut exps = vec![0u8; 3 * d];
            for i in 0..d {
                exps[i] = first[i];
                exps[d + i] = content[i] - first[i];
            }
            out.push((Monomial::from_exponents(&exps), deg_total - deg_a));
        }
        // odometer over 0..=content[i]
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            if first[i] < content[i] {
                first[i] += 1;
                break;
            }
            first[i] = 0;
            i += 1;
        }
    }
}

/// Solves `dX = −h` with `X` in the SGS-constrained slot, one content block
/// at a time; `d` preserves both the base monomial and the content.
fn solve_order(h: &PolySymbol, n: usize, d: usize) -> Result<PolySymbol> {
    let shape2 = Shape::new(d, 2);
    let p3 = 3 * d;
    let mut groups: BTreeMap<Content, BTreeMap<Monomial, BTreeMap<Beta, Rational>>> = BTreeMap::new();
    for (m, c) in h.terms() {
        let e = m.exponents();
        let content: Content = (0..d).map(|i| (0..3).map(|b| e[b * d + i]).sum()).collect();
        let mut p_exps = e.to_vec();
        for v in p_exps.iter_mut().skip(p3) {
            *v = 0;
        }
        let beta: Beta = e[p3..].to_vec();
        groups
            .entry(content)
            .or_default()
            .entry(Monomial::from_exponents(&p_exps))
            .or_default()
            .insert(beta, -c.clone());
    }

    let mut out = PolySymbol::zero(shape2);
    for (content, rows_by_mono) in &groups {
        let basis = mixed_basis(content);
        let images: Vec<PolySymbol> = basis
            .iter()
            .map(|(u, _)| {
                let unit = PolySymbol::from_terms(shape2, [(u.clone(), Rational::one())]).expect("basis monomial");
                coboundary_poly(&unit)
            })
            .collect();
        let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
        for m in images.iter().flat_map(|f| f.terms().map(|(m, _)| m)).chain(rows_by_mono.keys()) {
            let next = row_of.len();
            row_of.entry(m.clone()).or_insert(next);
        }
        let betas: Vec<&Beta> = {
            let mut all: Vec<&Beta> = rows_by_mono.values().flat_map(|r| r.keys()).collect();
            all.sort();
            all.dedup();
            all
        };
        let rows = row_of.len() + 1;
        let mut a = vec![vec![Rational::zero(); basis.len()]; rows];
        let mut b = vec![vec![Rational::zero(); betas.len()]; rows];
        for (col, f) in images.iter().enumerate() {
            for (m, c) in f.terms() {
                a[row_of[m]][col] = c.clone();
            }
        }
        // S(p, −p, x) = 0 collapses each content block to a single equation.
        let sgs_row = rows - 1;
        for (col, (_, second_degree)) in basis.iter().enumerate() {
            a[sgs_row][col] = if second_degree % 2 == 0 { Rational::one() } else { -Rational::one() };
        }
        for (m, by_beta) in rows_by_mono {
            for (beta, c) in by_beta {
                let k = betas.binary_search(&beta).expect("collected above");
                b[row_of[m]][k] = c.clone();
            }
        }
        match solve(a, b, basis.len()) {
            Solution::Inconsistent { column } => {
                return Err(Error::Infeasible {
                    order: n,
                    detail: format!("no solution for covector content {content:?} at base exponents {:?}", betas[column]),
                });
            }
            Solution::Solved(x) => {
                for ((u, _), coeffs) in basis.iter().zip(&x) {
                    for (beta, c) in betas.iter().zip(coeffs) {
                        if c.is_zero() {
                            continue;
                        }
                        let mut exps = u.exponents().to_vec();
                        exps[2 * d..].copy_from_slice(beta);
                        out.add_term(Monomial::from_exponents(&exps), c.clone());
                    }
                }
            }
        }
    }
    Ok(out)
}
