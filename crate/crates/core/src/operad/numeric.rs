//! Floating-point fixed-point solution of the implicit composition equations.

use num_traits::ToPrimitive;

use super::{GenFunction, Plan};
use crate::symbols::{FormalSeries, PolySymbol};
use crate::{Error, Result};

/// A polynomial with `f64` coefficients, ready for repeated evaluation.
#[derive(Clone, Debug, Default)]
pub(crate) struct Compiled {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl Compiled {
    fn accumulate(&mut self, f: &PolySymbol, scale: f64) {
        for (m, c) in f.terms() {
            let coeff = c.to_f64().unwrap_or(f64::NAN) * scale;
            let factors = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v, e as i32))
                .collect();
            self.terms.push((coeff, factors));
        }
    }

    pub(crate) fn eval(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(v, e)| acc * values[v].powi(e)))
            .sum()
    }
}

/// `Σ ε^i S^{(i)}` with its gradient, all orders included.
#[derive(Clone, Debug)]
pub(crate) struct CompiledSeries {
    value: Compiled,
    partials: Vec<Compiled>,
}

impl CompiledSeries {
    pub(crate) fn new(s: &FormalSeries, eps: f64) -> CompiledSeries {
        let n = s.shape().var_count();
        let mut value = Compiled::default();
        let mut partials = vec![Compiled::default(); n];
        for (i, f) in s.orders() {
            let scale = eps.powi(i as i32);
            value.accumulate(f, scale);
            for (v, slot) in partials.iter_mut().enumerate() {
                slot.accumulate(&f.partial(v), scale);
            }
        }
        CompiledSeries { value, partials }
    }

    pub(crate) fn value(&self, at: &[f64]) -> f64 {
        self.value.eval(at)
    }

    pub(crate) fn partial(&self, v: usize, at: &[f64]) -> f64 {
        self.partials[v].eval(at)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Largest accepted `|ε|`.
    pub max_eps: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            tol: 1e-12,
            max_iter: 200,
            max_eps: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPhi {
    /// The full value `Φ` including the trivial part.
    pub value: f64,
    /// `Φ − p_G^Σ·x_F`, computed without that cancellation.
    pub deformation: f64,
    pub iterations: usize,
}

/// Solves `p_F = ∇_x G(p_G, x_G)`, `x_G = ∇_p F(p_F, x_F)` by fixed-point
/// iteration from the trivial base point and returns the stationary value
/// `G(p_G, x_G) + F(p_F, x_F) − x_G·p_F`.
///
/// `point` lists the inner covectors and then `x_F`, in the layout of the
/// composite's shape.
pub fn numeric_phi(
    f: &GenFunction,
    gs: &[GenFunction],
    point: &[f64],
    eps: f64,
    opts: &NumericOptions,
) -> Result<NumericPhi> {
    let inner: Vec<&FormalSeries> = gs.iter().map(GenFunction::deformation).collect();
    numeric_phi_series(f.deformation(), &inner, point, eps, opts)
}

/// [`numeric_phi`] on bare deformation series, graded or not.
pub fn numeric_phi_series(
    f: &FormalSeries,
    gs: &[&FormalSeries],
    point: &[f64],
    eps: f64,
    opts: &NumericOptions,
) -> Result<NumericPhi> {
    if gs.len() != f.arity() {
        return Err(Error::ArityMismatch(format!("outer arity {} with {} inner functions", f.arity(), gs.len())));
    }
    let d = f.dim();
    if gs.iter().any(|g| g.dim() != d) {
        return Err(Error::ShapeMismatch("inner and outer dimensions differ".into()));
    }
    if eps.abs() > opts.max_eps {
        return Err(Error::OutOfRange(format!("|eps| = {} exceeds {}", eps.abs(), opts.max_eps)));
    }
    let plan = Plan::new(d, gs.iter().map(|g| g.arity()).collect());
    if point.len() != plan.target.var_count() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} values, expected {}",
            point.len(),
            plan.target.var_count()
        )));
    }
    if point.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = gs.len();
    let x_f = &point[plan.target.x_var(0)..];
    let base_p: Vec<Vec<f64>> = (0..n)
        .map(|b| {
            (0..d)
                .map(|i| (0..plan.arities[b]).map(|j| point[plan.target.p_var(plan.offsets[b] + j, i)]).sum())
                .collect()
        })
        .collect();

    let fc = CompiledSeries::new(f, eps);
    let gcs: Vec<CompiledSeries> = gs.iter().map(|g| CompiledSeries::new(g, eps)).collect();
    let fs = f.shape();

    // F's variables: p_F blocks, then x_F.
    let mut f_vars: Vec<f64> = base_p.iter().flatten().copied().collect();
    f_vars.extend_from_slice(x_f);
    // Each inner function's variables: its covectors, then its x_G block.
    let mut g_vars: Vec<Vec<f64>> = (0..n)
        .map(|b| {
            let mut v: Vec<f64> = (0..plan.arities[b])
                .flat_map(|j| (0..d).map(move |i| (j, i)))
                .map(|(j, i)| point[plan.target.p_var(plan.offsets[b] + j, i)])
                .collect();
            v.extend_from_slice(x_f);
            v
        })
        .collect();

    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut change: f64 = 0.0;
        for b in 0..n {
            let gshape = gs[b].shape();
            for i in 0..d {
                let next = x_f[i] + fc.partial(fs.p_var(b, i), &f_vars);
                let slot = &mut g_vars[b][gshape.x_var(i)];
                change = change.max((next - *slot).abs());
                *slot = next;
            }
        }
        for b in 0..n {
            let gshape = gs[b].shape();
            for i in 0..d {
                let next = base_p[b][i] + gcs[b].partial(gshape.x_var(i), &g_vars[b]);
                let slot = &mut f_vars[fs.p_var(b, i)];
                change = change.max((next - *slot).abs());
                *slot = next;
            }
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

    let mut deformation = fc.value(&f_vars);
    let mut trivial = 0.0;
    for b in 0..n {
        let gshape = gs[b].shape();
        deformation += gcs[b].value(&g_vars[b]);
        for i in 0..d {
            let a = g_vars[b][gshape.x_var(i)] - x_f[i];
            let bb = f_vars[fs.p_var(b, i)] - base_p[b][i];
            deformation -= a * bb;
            trivial += base_p[b][i] * x_f[i];
        }
    }
    if !deformation.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(NumericPhi {
        value: trivial + deformation,
        deformation,
        iterations,
    })
}
