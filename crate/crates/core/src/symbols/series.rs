use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{PolySymbol, Rational, Shape};
use crate::{Error, Result};

/// ε-graded family `Σ_{i≥1} ε^i F^{(i)}` of symbols sharing one shape.
///
/// When `graded` is set, every order-`i` symbol is homogeneous of degree
/// `i + 1` in the covector variables jointly. Zero orders are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    shape: Shape,
    orders: BTreeMap<usize, PolySymbol>,
    graded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingViolation {
    pub order: usize,
    pub monomial: String,
    pub p_degree: usize,
}

/// Result of [`FormalSeries::check_grading`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradingReport {
    pub violations: Vec<GradingViolation>,
}

impl GradingReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GradingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return f.write_str("grading ok");
        }
        for v in &self.violations {
            writeln!(
                f,
                "order {}: monomial {} has p-degree {}, expected {}",
                v.order,
                v.monomial,
                v.p_degree,
                v.order + 1
            )?;
        }
        Ok(())
    }
}

impl FormalSeries {
    pub fn new(shape: Shape, graded: bool) -> FormalSeries {
        FormalSeries {
            shape,
            orders: BTreeMap::new(),
            graded,
        }
    }

    pub fn from_orders(
        shape: Shape,
        graded: bool,
        orders: impl IntoIterator<Item = (usize, PolySymbol)>,
    ) -> Result<FormalSeries> {
        let mut out = FormalSeries::new(shape, graded);
        for (i, f) in orders {
            let merged = match out.orders.get(&i) {
                Some(prev) => prev.try_add(&f)?,
                None => f,
            };
            out.set_order(i, merged)?;
        }
        Ok(out)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn arity(&self) -> usize {
        self.shape.blocks
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn is_zero(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self, i: usize) -> Option<&PolySymbol> {
        self.orders.get(&i)
    }

    /// The order-`i` symbol, zero when absent.
    pub fn coefficient(&self, i: usize) -> PolySymbol {
        self.orders
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PolySymbol::zero(self.shape))
    }

    pub fn orders(&self) -> impl Iterator<Item = (usize, &PolySymbol)> {
        self.orders.iter().map(|(&i, f)| (i, f))
    }

    pub fn max_order(&self) -> usize {
        self.orders.keys().next_back().copied().unwrap_or(0)
    }

    /// Stores `f` as the order-`i` symbol, enforcing the series invariants.
    pub fn set_order(&mut self, i: usize, f: PolySymbol) -> Result<()> {
        if i == 0 {
            return Err(Error::OutOfRange("deformation orders start at 1".into()));
        }
        if f.shape() != self.shape {
            return Err(Error::ShapeMismatch(format!(
                "order {i} symbol over {:?}, series over {:?}",
                f.shape(),
                self.shape
            )));
        }
        if self.graded {
            if let Some(m) = f.terms().map(|(m, _)| m).find(|m| f.p_degree(m) != i + 1) {
                return Err(Error::Ungraded(format!(
                    "order {i} has a monomial of p-degree {}",
                    f.p_degree(m)
                )));
            }
        }
        if f.is_zero() {
            self.orders.remove(&i);
        } else {
            self.orders.insert(i, f);
        }
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, i: usize, f: PolySymbol) {
        debug_assert!(i >= 1 && f.shape() == self.shape);
        if f.is_zero() {
            self.orders.remove(&i);
        } else {
            self.orders.insert(i, f);
        }
    }

    /// Orders `≤ n` only.
    pub fn truncate(&self, n: usize) -> FormalSeries {
        FormalSeries {
            shape: self.shape,
            orders: self.orders.range(..=n).map(|(&i, f)| (i, f.clone())).collect(),
            graded: self.graded,
        }
    }

    /// Orders `< n` only.
    pub fn below(&self, n: usize) -> FormalSeries {
        self.truncate(n.saturating_sub(1))
    }

    fn combine(&self, other: &FormalSeries, sign: &Rational) -> Result<FormalSeries> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        let mut out = FormalSeries::new(self.shape, self.graded && other.graded);
        out.orders = self.orders.clone();
        for (&i, g) in &other.orders {
            let mut sum = out.coefficient(i);
            sum.add_scaled(g, sign);
            out.insert_unchecked(i, sum);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.combine(other, &Rational::one())
    }

    pub fn try_sub(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> FormalSeries {
        let mut out = FormalSeries::new(self.shape, self.graded);
        for (&i, f) in &self.orders {
            out.insert_unchecked(i, f.scale(c));
        }
        out
    }

    /// Applies a substitution to every order; the result is marked ungraded
    /// until re-checked with [`FormalSeries::regrade`].
    pub fn substitute(&self, images: &[PolySymbol], target: Shape) -> Result<FormalSeries> {
        let mut out = FormalSeries::new(target, false);
        for (&i, f) in &self.orders {
            out.insert_unchecked(i, f.substitute(images, target)?);
        }
        Ok(out)
    }

    /// Marks the series graded after verifying the grading condition.
    pub fn regrade(mut self) -> Result<FormalSeries> {
        let report = self.check_grading();
        if !report.passes() {
            return Err(Error::Ungraded(report.to_string()));
        }
        self.graded = true;
        Ok(self)
    }

    /// Lists every monomial whose covector degree differs from `order + 1`.
    pub fn check_grading(&self) -> GradingReport {
        let mut report = GradingReport::default();
        for (&i, f) in &self.orders {
            for (m, _) in f.terms() {
                let deg = f.p_degree(m);
                if deg != i + 1 {
                    let mono = PolySymbol::from_terms(self.shape, [(m.clone(), Rational::one())])
                        .expect("monomial from the same shape");
                    report.violations.push(GradingViolation {
                        order: i,
                        monomial: mono.to_string(),
                        p_degree: deg,
                    });
                }
            }
        }
        report
    }

    /// `Σ_{i ≤ n} ε^i F^{(i)}(point)`, exactly.
    pub fn series_eval(&self, point: &[Rational], eps: &Rational, n: usize) -> Result<Rational> {
        if point.len() != self.shape.var_count() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} values, shape needs {}",
                point.len(),
                self.shape.var_count()
            )));
        }
        let mut total = Rational::zero();
        for (&i, f) in self.orders.range(..=n) {
            total += num_traits::pow::pow(eps.clone(), i) * f.eval(point)?;
        }
        Ok(total)
    }

    /// True when every order is odd in the covector variables.
    pub fn is_odd_in_p(&self) -> bool {
        self.orders.values().all(PolySymbol::is_odd_in_p)
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, g)) in self.orders.iter().enumerate() {
            if k > 0 {
                f.write_str("\n")?;
            }
            write!(f, "eps^{i}: {g}")?;
        }
        Ok(())
    }
}

/// Reinterprets the `n` covector blocks of dimension `d` as one covector of
/// dimension `d·n` (block-major), and back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockFlattening {
    pub dim: usize,
    pub blocks: usize,
}

impl BlockFlattening {
    pub fn new(dim: usize, blocks: usize) -> BlockFlattening {
        BlockFlattening { dim, blocks }
    }

    pub fn flat_dim(&self) -> usize {
        self.dim * self.blocks
    }

    pub fn flatten(&self, block: usize, comp: usize) -> usize {
        debug_assert!(block < self.blocks && comp < self.dim);
        block * self.dim + comp
    }

    pub fn unflatten(&self, k: usize) -> (usize, usize) {
        debug_assert!(k < self.flat_dim());
        (k / self.dim, k % self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::poly::{integer, rational};

    fn sh(d: usize, n: usize) -> Shape {
        Shape::new(d, n)
    }

    #[test]
    fn empty_series_evaluates_to_zero() {
        let s = FormalSeries::new(sh(1, 1), true);
        assert!(s.series_eval(&[integer(1), integer(2)], &rational(1, 2), 5).unwrap().is_zero());
    }

    #[test]
    fn truncated_evaluation() {
        let shape = sh(1, 0);
        let x = PolySymbol::x(shape, 0).unwrap();
        let s = FormalSeries::from_orders(shape, false, [(1, x.clone()), (2, x.pow(2))]).unwrap();
        assert_eq!(s.series_eval(&[integer(2)], &rational(1, 2), 2).unwrap(), integer(2));
        assert_eq!(s.series_eval(&[integer(2)], &rational(1, 2), 1).unwrap(), integer(1));
    }

    #[test]
    fn grading_examples() {
        let shape = sh(1, 2);
        let p1 = PolySymbol::p(shape, 0, 0).unwrap();
        let p2 = PolySymbol::p(shape, 1, 0).unwrap();
        let x = PolySymbol::x(shape, 0).unwrap();
        let ok = FormalSeries::from_orders(shape, false, [(1, &(&p1 * &p2) * &x)]).unwrap();
        assert!(ok.check_grading().passes());
        let bad = FormalSeries::from_orders(shape, false, [(1, p1.clone())]).unwrap();
        let report = bad.check_grading();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].p_degree, 1);
        let cubic = FormalSeries::from_orders(shape, false, [(2, &p1.pow(2) * &p2)]).unwrap();
        assert!(cubic.check_grading().passes());
        assert!(FormalSeries::from_orders(shape, true, [(1, p1)]).is_err());
    }

    #[test]
    fn order_zero_rejected() {
        let shape = sh(1, 1);
        let mut s = FormalSeries::new(shape, false);
        assert!(s.set_order(0, PolySymbol::one(shape)).is_err());
    }

    #[test]
    fn flattening_round_trip() {
        let fl = BlockFlattening::new(3, 4);
        for b in 0..4 {
            for i in 0..3 {
                assert_eq!(fl.unflatten(fl.flatten(b, i)), (b, i));
            }
        }
        assert_eq!(fl.flat_dim(), 12);
    }

    #[test]
    fn oddness() {
        let shape = sh(1, 1);
        let p = PolySymbol::p(shape, 0, 0).unwrap();
        let odd = FormalSeries::from_orders(shape, true, [(2, p.pow(3))]).unwrap();
        assert!(odd.is_odd_in_p());
        let even = FormalSeries::from_orders(shape, true, [(1, p.pow(2))]).unwrap();
        assert!(!even.is_odd_in_p());
    }
}
