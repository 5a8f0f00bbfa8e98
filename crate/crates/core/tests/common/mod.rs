#![allow(dead_code)]

use std::collections::BTreeMap;

use cotangent_operad::solver::LieAlgebra;
use cotangent_operad::symbols::{integer, rational};
use cotangent_operad::{FormalSeries, PolySymbol, Rational, Shape};
use num_traits::{One, Zero};

/// Polynomial-valued power series in ε truncated after `ε^n`.
#[derive(Clone, Debug)]
pub struct Trunc {
    pub coeffs: Vec<PolySymbol>,
}

impl Trunc {
    pub fn constant(f: PolySymbol, n: usize) -> Trunc {
        let shape = f.shape();
        let mut coeffs = vec![PolySymbol::zero(shape); n + 1];
        coeffs[0] = f;
        Trunc { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, other: &Trunc) -> Trunc {
        Trunc {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Trunc) -> Trunc {
        Trunc {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Trunc) -> Trunc {
        let n = self.order();
        let shape = self.coeffs[0].shape();
        let mut coeffs = vec![PolySymbol::zero(shape); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Trunc { coeffs }
    }

    /// Multiplies by `c·ε^k`.
    pub fn shifted(&self, k: usize, c: &Rational) -> Trunc {
        let n = self.order();
        let shape = self.coeffs[0].shape();
        let mut coeffs = vec![PolySymbol::zero(shape); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                coeffs[i + k] = self.coeffs[i].scale(c);
            }
        }
        Trunc { coeffs }
    }
}

/// `f(args)` where `args[v]` replaces variable `v` of `f`.
fn eval_poly(f: &PolySymbol, args: &[Trunc], n: usize, target: Shape) -> Trunc {
    let mut acc = Trunc::constant(PolySymbol::zero(target), n);
    for (m, c) in f.terms() {
        let mut term = Trunc::constant(PolySymbol::constant(target, c.clone()), n);
        for (v, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&args[v]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// `Σ_k ε^k s_k(args)`.
fn eval_series(s: &FormalSeries, args: &[Trunc], n: usize, target: Shape) -> Trunc {
    let mut acc = Trunc::constant(PolySymbol::zero(target), n);
    for (k, f) in s.orders() {
        if k <= n {
            acc = acc.add(&eval_poly(f, args, n, target).shifted(k, &Rational::one()));
        }
    }
    acc
}

fn partial_series(s: &FormalSeries, v: usize) -> FormalSeries {
    FormalSeries::from_orders(s.shape(), false, s.orders().map(|(k, f)| (k, f.partial(v)))).unwrap()
}

/// Composition by iterating the implicit equations
/// `x_G = x + ∇_p F̃(p_F, x)`, `p_F = P + ∇_x G̃(p_G, x_G)` in truncated
/// ε-series, then evaluating `Σ G̃ + F̃ − Σ (x_G − x)(p_F − P)`.
/// Returns the coefficients of orders `1..=n`.
pub fn picard_compose(f: &FormalSeries, gs: &[&FormalSeries], n: usize) -> Vec<PolySymbol> {
    let d = f.dim();
    let arities: Vec<usize> = gs.iter().map(|g| g.arity()).collect();
    let target = Shape::new(d, arities.iter().sum());
    let var = |v: usize| Trunc::constant(PolySymbol::variable(target, v), n);
    let mut offsets = Vec::new();
    let mut acc = 0;
    for &a in &arities {
        offsets.push(acc);
        acc += a;
    }
    let x0: Vec<Trunc> = (0..d).map(|i| var(target.x_var(i))).collect();
    let big_p: Vec<Vec<Trunc>> = (0..gs.len())
        .map(|b| {
            (0..d)
                .map(|i| {
                    let mut s = PolySymbol::zero(target);
                    for j in 0..arities[b] {
                        s = &s + &PolySymbol::variable(target, target.p_var(offsets[b] + j, i));
                    }
                    Trunc::constant(s, n)
                })
                .collect()
        })
        .collect();
    let fshape = f.shape();
    let f_dp: Vec<Vec<FormalSeries>> =
        (0..gs.len()).map(|b| (0..d).map(|i| partial_series(f, fshape.p_var(b, i))).collect()).collect();
    let g_dx: Vec<Vec<FormalSeries>> =
        gs.iter().map(|g| (0..d).map(|i| partial_series(g, g.shape().x_var(i))).collect()).collect();

    let mut x_g: Vec<Vec<Trunc>> = vec![x0.clone(); gs.len()];
    let mut p_f: Vec<Vec<Trunc>> = big_p.clone();
    let f_args = |p_f: &[Vec<Trunc>]| -> Vec<Trunc> {
        let mut args: Vec<Trunc> = p_f.iter().flatten().cloned().collect();
        args.extend(x0.iter().cloned());
        args
    };
    let g_args = |b: usize, x_g: &[Vec<Trunc>]| -> Vec<Trunc> {
        let mut args: Vec<Trunc> = (0..arities[b])
            .flat_map(|j| (0..d).map(move |i| (j, i)))
            .map(|(j, i)| var(target.p_var(offsets[b] + j, i)))
            .collect();
        args.extend(x_g[b].iter().cloned());
        args
    };
    for _ in 0..=n {
        let fa = f_args(&p_f);
        for b in 0..gs.len() {
            for i in 0..d {
                x_g[b][i] = x0[i].add(&eval_series(&f_dp[b][i], &fa, n, target));
            }
        }
        for b in 0..gs.len() {
            let ga = g_args(b, &x_g);
            for i in 0..d {
                p_f[b][i] = big_p[b][i].add(&eval_series(&g_dx[b][i], &ga, n, target));
            }
        }
    }
    let mut h = eval_series(f, &f_args(&p_f), n, target);
    for (b, g) in gs.iter().enumerate() {
        h = h.add(&eval_series(g, &g_args(b, &x_g), n, target));
        for i in 0..d {
            h = h.sub(&x_g[b][i].sub(&x0[i]).mul(&p_f[b][i].sub(&big_p[b][i])));
        }
    }
    h.coeffs[1..].to_vec()
}

/// Elements of the free associative algebra on `X = 0`, `Y = 1`,
/// truncated by word length.
#[derive(Clone, Debug, Default)]
pub struct FreeElem(pub BTreeMap<Vec<u8>, Rational>);

impl FreeElem {
    fn letter(l: u8) -> FreeElem {
        FreeElem(BTreeMap::from([(vec![l], Rational::one())]))
    }

    fn one() -> FreeElem {
        FreeElem(BTreeMap::from([(vec![], Rational::one())]))
    }

    fn add_scaled(&mut self, other: &FreeElem, c: &Rational) {
        for (w, v) in &other.0 {
            let slot = self.0.entry(w.clone()).or_insert_with(Rational::zero);
            *slot += v * c;
        }
        self.0.retain(|_, v| !v.is_zero());
    }

    fn mul(&self, other: &FreeElem, max: usize) -> FreeElem {
        let mut out = FreeElem::default();
        for (a, u) in &self.0 {
            for (b, v) in &other.0 {
                if a.len() + b.len() > max {
                    continue;
                }
                let mut w = a.clone();
                w.extend_from_slice(b);
                let slot = out.0.entry(w).or_insert_with(Rational::zero);
                *slot += u * v;
            }
        }
        out.0.retain(|_, v| !v.is_zero());
        out
    }

    fn exp_letter(l: u8, max: usize) -> FreeElem {
        let mut out = FreeElem::one();
        let mut power = FreeElem::one();
        let mut fact = Rational::one();
        for k in 1..=max {
            power = power.mul(&FreeElem::letter(l), max);
            fact *= integer(k as i64);
            out.add_scaled(&power, &fact.recip());
        }
        out
    }
}

/// `log(e^X e^Y)` up to word length `max`.
pub fn free_bch(max: usize) -> FreeElem {
    let e = FreeElem::exp_letter(0, max).mul(&FreeElem::exp_letter(1, max), max);
    let mut u = e.clone();
    u.add_scaled(&FreeElem::one(), &-Rational::one());
    let mut out = FreeElem::default();
    let mut power = FreeElem::one();
    for k in 1..=max {
        power = power.mul(&u, max);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_scaled(&power, &rational(sign, k as i64));
    }
    out
}

fn lie_bracket(lie: &LieAlgebra, u: &[PolySymbol], v: &[PolySymbol]) -> Vec<PolySymbol> {
    let d = lie.dim();
    let shape = u[0].shape();
    (0..d)
        .map(|k| {
            let mut acc = PolySymbol::zero(shape);
            for (i, ui) in u.iter().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    let c = lie.constant(i, j, k);
                    if !c.is_zero() {
                        acc = &acc + &(ui * vj).scale(c);
                    }
                }
            }
            acc
        })
        .collect()
}

pub fn covectors(d: usize, block: usize) -> Vec<PolySymbol> {
    let shape = Shape::new(d, 2);
    (0..d).map(|i| PolySymbol::p(shape, block, i).unwrap()).collect()
}

pub fn bracket_of(lie: &LieAlgebra, u: &[PolySymbol], v: &[PolySymbol]) -> Vec<PolySymbol> {
    lie_bracket(lie, u, v)
}

/// Degree-`m` part of `log(e^{p₁} e^{p₂})` in the Lie algebra, by the
/// Dynkin–Specht–Wever projection `P ↦ (1/m) Σ c_w [[…[w₁, w₂], …], w_m]`.
pub fn bch_degree(lie: &LieAlgebra, free: &FreeElem, m: usize) -> Vec<PolySymbol> {
    let d = lie.dim();
    let shape = Shape::new(d, 2);
    let letters = [covectors(d, 0), covectors(d, 1)];
    let mut acc = vec![PolySymbol::zero(shape); d];
    for (w, c) in free.0.iter().filter(|(w, _)| w.len() == m) {
        let mut nested = letters[w[0] as usize].clone();
        for &l in &w[1..] {
            nested = lie_bracket(lie, &nested, &letters[l as usize]);
        }
        let scale = c / integer(m as i64);
        for (a, b) in acc.iter_mut().zip(&nested) {
            *a = &*a + &b.scale(&scale);
        }
    }
    acc
}

/// `x·v` for a vector of symbols over `Shape(d, 2)`.
pub fn pair_with_x(v: &[PolySymbol]) -> PolySymbol {
    let shape = v[0].shape();
    let mut acc = PolySymbol::zero(shape);
    for (k, f) in v.iter().enumerate() {
        acc = &acc + &(f * &PolySymbol::x(shape, k).unwrap());
    }
    acc
}

/// Brute-force automorphism count of a vertex-labeled graph given by its
/// vertex labels and edge list, over all permutations.
pub fn brute_automorphisms<L: PartialEq>(labels: &[L], edges: &[(usize, usize)]) -> u64 {
    let n = labels.len();
    let has = |a: usize, b: usize| edges.iter().any(|&(u, v)| (u, v) == (a, b) || (v, u) == (a, b));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        if (0..n).all(|v| labels[p[v]] == labels[v]) && edges.iter().all(|&(u, v)| has(p[u], p[v])) {
            count += 1;
        }
    });
    count
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
