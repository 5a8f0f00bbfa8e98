//! Generating functions `S_0^n + S̃` and their operadic composition.

pub(crate) mod numeric;

use num_traits::{One, Zero};

use crate::config::Limits;
use crate::elementary::{Piece, SeriesPair};
use crate::symbols::contract::Contractor;
use crate::symbols::{FormalSeries, PolySymbol, Rational, Shape};
use crate::trees::enumerate_unrooted_with;
use crate::{Error, Result};

pub use numeric::{numeric_phi, numeric_phi_series, NumericOptions, NumericPhi};

/// `S = S_0^n + S̃` with `S_0^n(p, x) = (p_1 + … + p_n)·x` and `S̃` graded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunction {
    deformation: FormalSeries,
}

impl GenFunction {
    pub fn new(deformation: FormalSeries) -> Result<GenFunction> {
        if !deformation.is_graded() {
            let checked = deformation.regrade()?;
            return Ok(GenFunction { deformation: checked });
        }
        Ok(GenFunction { deformation })
    }

    /// `I(p, x) = p·x`.
    pub fn identity(dim: usize) -> GenFunction {
        GenFunction::trivial_product(1, dim)
    }

    pub fn trivial_product(arity: usize, dim: usize) -> GenFunction {
        GenFunction {
            deformation: FormalSeries::new(Shape::new(dim, arity), true),
        }
    }

    pub fn arity(&self) -> usize {
        self.deformation.arity()
    }

    pub fn dim(&self) -> usize {
        self.deformation.dim()
    }

    pub fn shape(&self) -> Shape {
        self.deformation.shape()
    }

    pub fn deformation(&self) -> &FormalSeries {
        &self.deformation
    }

    pub fn into_deformation(self) -> FormalSeries {
        self.deformation
    }

    /// `S_0^n + Σ_{i≤N} ε^i S̃^{(i)}` at an exact point in the shape's layout.
    pub fn eval(&self, point: &[Rational], eps: &Rational, truncation: usize) -> Result<Rational> {
        let shape = self.shape();
        let tail = self.deformation.series_eval(point, eps, truncation)?;
        let mut trivial = Rational::zero();
        for i in 0..shape.dim {
            let mut sum = Rational::zero();
            for b in 0..shape.blocks {
                sum += &point[shape.p_var(b, i)];
            }
            trivial += sum * &point[shape.x_var(i)];
        }
        Ok(trivial + tail)
    }
}

/// `F(G_1, …, G_n)` truncated at order `truncation`.
pub fn compose(f: &GenFunction, gs: &[GenFunction], truncation: usize) -> Result<GenFunction> {
    compose_with(f, gs, truncation, &Limits::default())
}

pub fn compose_with(f: &GenFunction, gs: &[GenFunction], truncation: usize, limits: &Limits) -> Result<GenFunction> {
    let inner: Vec<&FormalSeries> = gs.iter().map(GenFunction::deformation).collect();
    GenFunction::new(compose_series(f.deformation(), &inner, truncation, limits)?)
}

/// The tree expansion on bare deformation series. Inputs need not be
/// graded; the result is graded (and checked) exactly when all inputs are.
pub fn compose_series(f: &FormalSeries, gs: &[&FormalSeries], truncation: usize, limits: &Limits) -> Result<FormalSeries> {
    limits.check_truncation(truncation)?;
    if gs.len() != f.arity() {
        return Err(Error::ArityMismatch(format!(
            "outer arity {} with {} inner functions",
            f.arity(),
            gs.len()
        )));
    }
    let d = f.dim();
    if let Some(g) = gs.iter().find(|g| g.dim() != d) {
        return Err(Error::ShapeMismatch(format!("inner dim {} with outer dim {d}", g.dim())));
    }
    let plan = Plan::new(d, gs.iter().map(|g| g.arity()).collect());
    let pair = plan.pair(f, gs.iter().copied(), truncation);
    let mut out = FormalSeries::new(plan.target, false);
    for t in &enumerate_unrooted_with(truncation, &pair, limits)? {
        let c = pair.elementary_function_top(t);
        if c.is_zero() {
            continue;
        }
        let w = t.total_weight();
        let weight = Rational::new(One::one(), t.symmetry_coefficient().into());
        let mut acc = out.coefficient(w);
        acc.add_scaled(&c, &weight);
        out.insert_unchecked(w, acc);
    }
    if f.is_graded() && gs.iter().all(|g| g.is_graded()) {
        out = out.regrade()?;
    }
    Ok(out)
}

/// Variable bookkeeping for one composition: block offsets of the inner
/// functions inside the result and the base-point substitutions.
struct Plan {
    d: usize,
    arities: Vec<usize>,
    offsets: Vec<usize>,
    target: Shape,
}

impl Plan {
    fn new(d: usize, arities: Vec<usize>) -> Plan {
        let mut offsets = Vec::with_capacity(arities.len());
        let mut total = 0;
        for &k in &arities {
            offsets.push(total);
            total += k;
        }
        Plan {
            d,
            arities,
            offsets,
            target: Shape::new(d, total),
        }
    }

    /// `Σ_j p_{G_b, j}[i]` in the result ring.
    fn block_sum(&self, b: usize, i: usize) -> PolySymbol {
        let mut acc = PolySymbol::zero(self.target);
        for j in 0..self.arities[b] {
            acc.add_assign_ref(&PolySymbol::variable(self.target, self.target.p_var(self.offsets[b] + j, i)));
        }
        acc
    }

    fn x(&self, i: usize) -> PolySymbol {
        PolySymbol::variable(self.target, self.target.x_var(i))
    }

    fn pair<'a>(
        &self,
        f: &FormalSeries,
        gs: impl Iterator<Item = &'a FormalSeries>,
        truncation: usize,
    ) -> SeriesPair {
        let d = self.d;
        let n = self.arities.len();
        let fs = f.shape();
        let mut slots = vec![None; fs.var_count()];
        let mut images = vec![PolySymbol::zero(self.target); fs.var_count()];
        for b in 0..n {
            for i in 0..d {
                slots[fs.p_var(b, i)] = Some(b * d + i);
                images[fs.p_var(b, i)] = self.block_sum(b, i);
            }
        }
        for i in 0..d {
            images[fs.x_var(i)] = self.x(i);
        }
        let f_piece = Piece::new(Contractor::new(fs, slots, images, self.target), &f.truncate(truncation));

        let mut g_pieces = Vec::with_capacity(n);
        for (b, g) in gs.enumerate() {
            if g.is_zero() {
                continue;
            }
            let gs_ = g.shape();
            let mut slots = vec![None; gs_.var_count()];
            let mut images = vec![PolySymbol::zero(self.target); gs_.var_count()];
            for j in 0..self.arities[b] {
                for i in 0..d {
                    images[gs_.p_var(j, i)] =
                        PolySymbol::variable(self.target, self.target.p_var(self.offsets[b] + j, i));
                }
            }
            for i in 0..d {
                slots[gs_.x_var(i)] = Some(b * d + i);
                images[gs_.x_var(i)] = self.x(i);
            }
            g_pieces.push(Piece::new(
                Contractor::new(gs_, slots, images, self.target),
                &g.truncate(truncation),
            ));
        }
        SeriesPair::from_pieces(self.target, n * d, vec![f_piece], g_pieces)
    }
}
