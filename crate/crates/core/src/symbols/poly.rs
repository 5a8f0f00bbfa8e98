use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Variable layout of a symbol on `B_n = (ℝ^{d*})^n × ℝ^d`.
///
/// Variables are indexed `0..(blocks + 1) * dim`: covector block `b`
/// component `i` sits at `b * dim + i`, base component `i` at
/// `blocks * dim + i` (all zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub dim: usize,
    pub blocks: usize,
}

impl Shape {
    pub fn new(dim: usize, blocks: usize) -> Shape {
        Shape { dim, blocks }
    }

    pub fn var_count(&self) -> usize {
        (self.blocks + 1) * self.dim
    }

    pub fn p_var_count(&self) -> usize {
        self.blocks * self.dim
    }

    pub fn p_var(&self, block: usize, comp: usize) -> usize {
        debug_assert!(block < self.blocks && comp < self.dim);
        block * self.dim + comp
    }

    pub fn x_var(&self, comp: usize) -> usize {
        debug_assert!(comp < self.dim);
        self.blocks * self.dim + comp
    }

    pub fn is_p_var(&self, v: usize) -> bool {
        v < self.p_var_count()
    }

    /// `Some((block, comp))` for covector variables, `None` for base variables.
    pub fn p_position(&self, v: usize) -> Option<(usize, usize)> {
        self.is_p_var(v).then(|| (v / self.dim, v % self.dim))
    }

    pub fn comp(&self, v: usize) -> usize {
        v % self.dim
    }

    fn check_same(&self, other: &Shape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch(format!(
                "(dim {}, blocks {}) vs (dim {}, blocks {})",
                self.dim, self.blocks, other.dim, other.blocks
            )));
        }
        Ok(())
    }
}

/// Exponent vector over the variables of a [`Shape`].
///
/// Ordered graded-lexicographically: lower total degree first, then larger
/// exponent on the earlier variable first (covector blocks ascending, then
/// base variables).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u8; 16]>);

impl Monomial {
    pub fn one(vars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, vars))
    }

    pub fn from_exponents(exps: &[u8]) -> Monomial {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn exponent(&self, v: usize) -> u8 {
        self.0[v]
    }

    pub fn set_exponent(&mut self, v: usize, e: u8) {
        self.0[v] = e;
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn degree_in(&self, vars: impl IntoIterator<Item = usize>) -> usize {
        vars.into_iter().map(|v| self.0[v] as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.as_slice().cmp(self.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients in the covector
/// variables `p[b][i]` and base variables `x[i]` of a [`Shape`].
///
/// No zero coefficient is ever stored, so the zero polynomial has no terms.
/// Arithmetic operators panic on shape mismatch; the `try_*` methods report
/// it as an error instead.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySymbol {
    shape: Shape,
    terms: BTreeMap<Monomial, Rational>,
}

impl PolySymbol {
    pub fn zero(shape: Shape) -> PolySymbol {
        PolySymbol {
            shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(shape: Shape, c: Rational) -> PolySymbol {
        let mut out = PolySymbol::zero(shape);
        out.add_term(Monomial::one(shape.var_count()), c);
        out
    }

    pub fn one(shape: Shape) -> PolySymbol {
        PolySymbol::constant(shape, Rational::one())
    }

    /// The variable with flat index `v`; panics when out of range.
    pub fn variable(shape: Shape, v: usize) -> PolySymbol {
        assert!(v < shape.var_count(), "variable {v} out of range");
        let mut m = Monomial::one(shape.var_count());
        m.set_exponent(v, 1);
        let mut out = PolySymbol::zero(shape);
        out.terms.insert(m, Rational::one());
        out
    }

    /// `p[block][comp]`, zero-based.
    pub fn p(shape: Shape, block: usize, comp: usize) -> Result<PolySymbol> {
        if block >= shape.blocks || comp >= shape.dim {
            return Err(Error::OutOfRange(format!("p[{block}][{comp}] in {shape:?}")));
        }
        Ok(PolySymbol::variable(shape, shape.p_var(block, comp)))
    }

    /// `x[comp]`, zero-based.
    pub fn x(shape: Shape, comp: usize) -> Result<PolySymbol> {
        if comp >= shape.dim {
            return Err(Error::OutOfRange(format!("x[{comp}] in {shape:?}")));
        }
        Ok(PolySymbol::variable(shape, shape.x_var(comp)))
    }

    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<PolySymbol> {
        let mut out = PolySymbol::zero(shape);
        for (m, c) in terms {
            if m.len() != shape.var_count() {
                return Err(Error::ShapeMismatch(format!(
                    "monomial has {} exponents, shape needs {}",
                    m.len(),
                    shape.var_count()
                )));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &PolySymbol, factor: &Rational) {
        debug_assert_eq!(self.shape, other.shape);
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub(crate) fn add_assign_ref(&mut self, other: &PolySymbol) {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn try_add(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.shape.check_same(&other.shape)?;
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.shape.check_same(&other.shape)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        Ok(out)
    }

    pub fn try_mul(&self, other: &PolySymbol) -> Result<PolySymbol> {
        self.shape.check_same(&other.shape)?;
        let mut out = PolySymbol::zero(self.shape);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> PolySymbol {
        if factor.is_zero() {
            return PolySymbol::zero(self.shape);
        }
        PolySymbol {
            shape: self.shape,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> PolySymbol {
        let mut out = PolySymbol::one(self.shape);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to the variable with flat index `v`.
    pub fn partial(&self, v: usize) -> PolySymbol {
        let mut out = PolySymbol::zero(self.shape);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set_exponent(v, e - 1);
            out.add_term(dm, c * integer(e as i64));
        }
        out
    }

    /// Gradient in the covector block `block` (zero-based).
    pub fn grad_p(&self, block: usize) -> Result<Vec<PolySymbol>> {
        if block >= self.shape.blocks {
            return Err(Error::OutOfRange(format!("block {block} of {}", self.shape.blocks)));
        }
        Ok((0..self.shape.dim)
            .map(|i| self.partial(self.shape.p_var(block, i)))
            .collect())
    }

    pub fn grad_x(&self) -> Vec<PolySymbol> {
        (0..self.shape.dim).map(|i| self.partial(self.shape.x_var(i))).collect()
    }

    /// Exact evaluation; `values` lists all variables in flat-index order.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.shape.var_count() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} values, shape needs {}",
                values.len(),
                self.shape.var_count()
            )));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term *= num_traits::pow::pow(values[v].clone(), e as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces every variable `v` by `images[v]`, a polynomial over `target`.
    pub fn substitute(&self, images: &[PolySymbol], target: Shape) -> Result<PolySymbol> {
        if images.len() != self.shape.var_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.shape.var_count()
            )));
        }
        if let Some(bad) = images.iter().find(|i| i.shape != target) {
            return Err(Error::ShapeMismatch(format!("image over {:?}, expected {target:?}", bad.shape)));
        }
        let mut powers = PowerCache::new(images, target);
        let mut out = PolySymbol::zero(target);
        for (m, c) in &self.terms {
            let image = powers.monomial(m);
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    /// Total degree in the covector variables of a monomial.
    pub fn p_degree(&self, m: &Monomial) -> usize {
        m.degree_in(0..self.shape.p_var_count())
    }

    pub fn x_degree(&self, m: &Monomial) -> usize {
        m.degree_in(self.shape.p_var_count()..self.shape.var_count())
    }

    pub fn max_p_degree(&self) -> usize {
        self.terms.keys().map(|m| self.p_degree(m)).max().unwrap_or(0)
    }

    pub fn max_x_degree(&self) -> usize {
        self.terms.keys().map(|m| self.x_degree(m)).max().unwrap_or(0)
    }

    pub fn max_degree_in(&self, vars: &[usize]) -> usize {
        self.terms
            .keys()
            .map(|m| m.degree_in(vars.iter().copied()))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when every monomial has odd total covector degree.
    pub fn is_odd_in_p(&self) -> bool {
        self.terms.keys().all(|m| self.p_degree(m) % 2 == 1)
    }

    /// Restricts to the monomials satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> PolySymbol {
        PolySymbol {
            shape: self.shape,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `m`-th derivative contracted against `directions`.
    ///
    /// Each direction has one component per contracted variable: the
    /// covector variables of `slot`'s blocks (flattened block-major) or the
    /// base variables. The result is symmetric and multilinear in the
    /// directions.
    pub fn directional_contract(&self, directions: &[Vec<PolySymbol>], slot: ContractSlot) -> Result<PolySymbol> {
        let vars = slot.variables(self.shape)?;
        for d in directions {
            if d.len() != vars.len() {
                return Err(Error::ShapeMismatch(format!(
                    "direction has {} components, {} variables contracted",
                    d.len(),
                    vars.len()
                )));
            }
            if let Some(bad) = d.iter().find(|c| c.shape != self.shape) {
                return Err(Error::ShapeMismatch(format!("direction component over {:?}", bad.shape)));
            }
        }
        let mut slot_of = vec![None; self.shape.var_count()];
        for (k, &v) in vars.iter().enumerate() {
            slot_of[v] = Some(k);
        }
        let images: Vec<PolySymbol> = (0..self.shape.var_count())
            .map(|v| PolySymbol::variable(self.shape, v))
            .collect();
        let contractor = super::contract::Contractor::new(self.shape, slot_of, images, self.shape);
        let dirs: Vec<&[PolySymbol]> = directions.iter().map(Vec::as_slice).collect();
        Ok(contractor.contract(self, &dirs))
    }

    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match self.shape.p_position(v) {
                Some((b, i)) => write!(f, "p{}_{}", b + 1, i + 1)?,
                None => write!(f, "x{}", self.shape.comp(v) + 1)?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

/// Which variables a directional derivative acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractSlot {
    /// Covector variables of the blocks in `first..first + count`.
    P { first: usize, count: usize },
    /// Base variables.
    X,
}

impl ContractSlot {
    pub fn block(b: usize) -> ContractSlot {
        ContractSlot::P { first: b, count: 1 }
    }

    pub fn variables(&self, shape: Shape) -> Result<Vec<usize>> {
        match *self {
            ContractSlot::P { first, count } => {
                if first + count > shape.blocks {
                    return Err(Error::OutOfRange(format!(
                        "blocks {first}..{} of {}",
                        first + count,
                        shape.blocks
                    )));
                }
                Ok((first * shape.dim..(first + count) * shape.dim).collect())
            }
            ContractSlot::X => Ok((0..shape.dim).map(|i| shape.x_var(i)).collect()),
        }
    }
}

/// Memoized products of variable images, used by substitution.
pub(crate) struct PowerCache<'a> {
    images: &'a [PolySymbol],
    target: Shape,
    powers: Vec<Vec<PolySymbol>>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(images: &'a [PolySymbol], target: Shape) -> Self {
        PowerCache {
            images,
            target,
            powers: vec![Vec::new(); images.len()],
        }
    }

    fn power(&mut self, v: usize, e: u8) -> &PolySymbol {
        let cache = &mut self.powers[v];
        if cache.is_empty() {
            cache.push(PolySymbol::one(self.target));
        }
        while cache.len() <= e as usize {
            let next = &cache[cache.len() - 1] * &self.images[v];
            cache.push(next);
        }
        &cache[e as usize]
    }

    pub(crate) fn monomial(&mut self, m: &Monomial) -> PolySymbol {
        let mut out = PolySymbol::one(self.target);
        for (v, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let p = self.power(v, e).clone();
                out = &out * &p;
            }
        }
        out
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        self.try_add(rhs).expect("shape mismatch in addition")
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        self.try_sub(rhs).expect("shape mismatch in subtraction")
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        self.try_mul(rhs).expect("shape mismatch in multiplication")
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        self.scale(&-Rational::one())
    }
}

impl Add for PolySymbol {
    type Output = PolySymbol;
    fn add(mut self, rhs: PolySymbol) -> PolySymbol {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: PolySymbol) -> PolySymbol {
        &self - &rhs
    }
}

impl Mul for PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: PolySymbol) -> PolySymbol {
        &self * &rhs
    }
}

impl Neg for PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(d: usize, n: usize) -> Shape {
        Shape::new(d, n)
    }

    #[test]
    fn cancellation_leaves_no_terms() {
        let sh = s(1, 1);
        let a = &PolySymbol::p(sh, 0, 0).unwrap() * &PolySymbol::x(sh, 0).unwrap();
        let sum = &a + &(-&a);
        assert!(sum.is_zero());
        assert_eq!(sum.len(), 0);
    }

    #[test]
    fn product_of_blocks() {
        let sh = s(1, 2);
        let prod = &PolySymbol::p(sh, 0, 0).unwrap() * &PolySymbol::p(sh, 1, 0).unwrap();
        assert_eq!(prod.to_string(), "p1_1*p2_1");
    }

    #[test]
    fn scale_halves() {
        let sh = s(1, 0);
        let x2 = PolySymbol::x(sh, 0).unwrap().pow(2).scale(&integer(2));
        assert_eq!(x2.scale(&rational(1, 2)), PolySymbol::x(sh, 0).unwrap().pow(2));
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = PolySymbol::one(s(1, 1));
        let b = PolySymbol::one(s(1, 2));
        assert!(matches!(a.try_add(&b), Err(Error::ShapeMismatch(_))));
        assert!(PolySymbol::p(s(1, 1), 1, 0).is_err());
    }

    #[test]
    fn gradients() {
        let sh = s(1, 1);
        let p = PolySymbol::p(sh, 0, 0).unwrap();
        let x = PolySymbol::x(sh, 0).unwrap();
        let f = &p * &x;
        assert_eq!(f.grad_p(0).unwrap(), vec![x.clone()]);
        assert_eq!(f.grad_x(), vec![p.clone()]);
        assert!(x.pow(2).grad_p(0).unwrap()[0].is_zero());
        assert!(f.grad_p(1).is_err());
    }

    #[test]
    fn evaluation() {
        let sh = s(1, 1);
        let f = &PolySymbol::p(sh, 0, 0).unwrap() * &PolySymbol::x(sh, 0).unwrap();
        assert_eq!(f.eval(&[integer(2), integer(3)]).unwrap(), integer(6));
        assert!(f.eval(&[integer(2)]).is_err());
    }

    #[test]
    fn contraction_first_order() {
        let sh = s(1, 0);
        let x = PolySymbol::x(sh, 0).unwrap();
        let out = x
            .pow(2)
            .directional_contract(&[vec![PolySymbol::one(sh)]], ContractSlot::X)
            .unwrap();
        assert_eq!(out, x.scale(&integer(2)));
    }

    #[test]
    fn contraction_second_order_by_hand() {
        // f = p1² p2 in one block of dimension 2, with symbolic directions u, v
        // living in extra blocks so they stay independent variables.
        let sh = s(2, 3);
        let p = |b, i| PolySymbol::p(sh, b, i).unwrap();
        let f = &p(0, 0).pow(2) * &p(0, 1);
        let u = vec![p(1, 0), p(1, 1)];
        let v = vec![p(2, 0), p(2, 1)];
        let got = f
            .directional_contract(&[u.clone(), v.clone()], ContractSlot::block(0))
            .unwrap();
        let expected = (&(&(&u[0] * &v[0]) * &p(0, 1)) + &(&(&(&u[0] * &v[1]) + &(&u[1] * &v[0])) * &p(0, 0)))
            .scale(&integer(2));
        assert_eq!(got, expected);
        let swapped = f.directional_contract(&[v, u], ContractSlot::block(0)).unwrap();
        assert_eq!(got, swapped);
    }

    #[test]
    fn contraction_length_mismatch() {
        let sh = s(2, 1);
        let f = PolySymbol::x(sh, 0).unwrap();
        assert!(f
            .directional_contract(&[vec![PolySymbol::one(sh)]], ContractSlot::X)
            .is_err());
    }

    #[test]
    fn substitution_into_larger_shape() {
        let src = s(1, 1);
        let dst = s(1, 2);
        let f = &PolySymbol::p(src, 0, 0).unwrap().pow(2) * &PolySymbol::x(src, 0).unwrap();
        let images = vec![
            &PolySymbol::p(dst, 0, 0).unwrap() + &PolySymbol::p(dst, 1, 0).unwrap(),
            PolySymbol::x(dst, 0).unwrap(),
        ];
        let g = f.substitute(&images, dst).unwrap();
        assert_eq!(g.to_string(), "p1_1^2*x1 + 2*p1_1*p2_1*x1 + p2_1^2*x1");
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::from_exponents(&[1, 0]);
        let b = Monomial::from_exponents(&[0, 1]);
        let c = Monomial::from_exponents(&[0, 2]);
        assert!(a < b);
        assert!(b < c);
        assert!(Monomial::one(2) < a);
    }
}
