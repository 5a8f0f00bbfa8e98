use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poisson::{validate_poisson, PoissonStructure};
use crate::config::Limits;
use crate::symbols::{FormalSeries, PolySymbol, Rational, Shape};
use crate::{Error, Result};

/// Structure constants `c^{ij}_k` of a Lie bracket on covectors,
/// `[p, q]_k = Σ c^{ij}_k p_i q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<Rational>,
}

impl LieAlgebra {
    /// From `(i, j, k, c^{ij}_k)` entries, zero-based. Entries are taken as
    /// given; antisymmetry is checked by [`LieAlgebra::validate`].
    pub fn new(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<LieAlgebra> {
        let mut constants = vec![Rational::zero(); dim * dim * dim];
        for (i, j, k, c) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::OutOfRange(format!("constant ({i}, {j}, {k}) in dimension {dim}")));
            }
            constants[(i * dim + j) * dim + k] = c.clone();
        }
        Ok(LieAlgebra { dim, constants })
    }

    /// `[e_1, e_2] = e_3`.
    pub fn heisenberg() -> LieAlgebra {
        let one = Rational::one();
        LieAlgebra::new(3, &[(0, 1, 2, one.clone()), (1, 0, 2, -one)]).expect("indices in range")
    }

    /// `c^{ij}_k = ε_{ijk}`.
    pub fn so3() -> LieAlgebra {
        let mut entries = Vec::new();
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            entries.push((i, j, k, Rational::one()));
            entries.push((j, i, k, -Rational::one()));
        }
        LieAlgebra::new(3, &entries).expect("indices in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Componentwise bracket of two vectors of symbols.
    pub fn bracket(&self, u: &[PolySymbol], v: &[PolySymbol]) -> Vec<PolySymbol> {
        let shape = u[0].shape();
        let mut out = vec![PolySymbol::zero(shape); self.dim];
        for (i, ui) in u.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, f)| !f.is_zero()) {
                let uv = ui * vj;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        slot.add_scaled(&uv, c);
                    }
                }
            }
        }
        out
    }

    /// The linear Poisson structure `α^{ij}(x) = c^{ij}_k x_k`.
    pub fn poisson(&self) -> PoissonStructure {
        let base = Shape::new(self.dim, 0);
        let matrix = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let mut f = PolySymbol::zero(base);
                        for k in 0..self.dim {
                            f.add_scaled(&PolySymbol::variable(base, base.x_var(k)), self.constant(i, j, k));
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        PoissonStructure::from_matrix(matrix).expect("square over the base")
    }

    /// Antisymmetry in the upper indices and the Jacobi identity.
    pub fn validate(&self) -> Result<()> {
        validate_poisson(&self.poisson()).into_result()
    }
}

/// `B_0, …, B_n` from `Σ_{k≤m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

fn add_vec(a: &[PolySymbol], b: &[PolySymbol], scale: &Rational) -> Vec<PolySymbol> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut s = x.clone();
            s.add_scaled(y, scale);
            s
        })
        .collect()
}

/// All ordered ways to write `n` as a sum of `parts` positive integers.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The homogeneous pieces `Z_1, …, Z_{max}` of `log(e^X e^Y)` with
/// `X = p₁`, `Y = p₂`, from the recursion
/// `(n+1) Z_{n+1} = ½[X − Y, Z_n] + Σ_p B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n} [Z_{k_1}, […, [Z_{k_{2p}}, X + Y]…]]`.
pub fn bch_terms(lie: &LieAlgebra, max: usize) -> Vec<Vec<PolySymbol>> {
    let d = lie.dim;
    let shape = Shape::new(d, 2);
    let x: Vec<PolySymbol> = (0..d).map(|i| PolySymbol::variable(shape, shape.p_var(0, i))).collect();
    let y: Vec<PolySymbol> = (0..d).map(|i| PolySymbol::variable(shape, shape.p_var(1, i))).collect();
    let sum = add_vec(&x, &y, &Rational::one());
    let diff = add_vec(&x, &y, &-Rational::one());
    let bern = bernoulli_numbers(max);
    let half = Rational::new(1.into(), 2.into());
    // z[n] = Z_n, z[0] unused
    let mut z: Vec<Vec<PolySymbol>> = vec![vec![PolySymbol::zero(shape); d], sum.clone()];
    for n in 1..max {
        let mut next: Vec<PolySymbol> = lie.bracket(&diff, &z[n]).iter().map(|f| f.scale(&half)).collect();
        for p in 1..=n / 2 {
            let coeff = &bern[2 * p] / factorial(2 * p);
            for parts in compositions(n, 2 * p) {
                let mut acc = sum.clone();
                for &k in parts.iter().rev() {
                    acc = lie.bracket(&z[k], &acc);
                }
                next = add_vec(&next, &acc, &coeff);
            }
        }
        let inv = Rational::new(1.into(), BigInt::from(n + 1));
        z.push(next.iter().map(|f| f.scale(&inv)).collect());
    }
    z.truncate(max + 1);
    z
}

/// `S̃` with `S_0² + S̃ = x·BCH(p₁, p₂)` truncated at `order`: the order-`n`
/// term is `x·Z_{n+1}`.
pub fn bch_generating_function(lie: &LieAlgebra, order: usize) -> Result<FormalSeries> {
    bch_generating_function_with(lie, order, &Limits::default())
}

pub fn bch_generating_function_with(lie: &LieAlgebra, order: usize, limits: &Limits) -> Result<FormalSeries> {
    lie.validate()?;
    limits.check_truncation(order)?;
    let d = lie.dim;
    let shape = Shape::new(d, 2);
    let z = bch_terms(lie, order + 1);
    let mut s = FormalSeries::new(shape, true);
    for n in 1..=order {
        let mut f = PolySymbol::zero(shape);
        for (k, zk) in z[n + 1].iter().enumerate() {
            f.add_assign_ref(&(zk * &PolySymbol::variable(shape, shape.x_var(k))));
        }
        s.set_order(n, f)?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::rational;

    #[test]
    fn bernoulli() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], rational(-1, 2));
        assert_eq!(b[2], rational(1, 6));
        assert_eq!(b[3], Rational::zero());
        assert_eq!(b[4], rational(-1, 30));
        assert_eq!(b[6], rational(1, 42));
        assert_eq!(b[8], rational(-1, 30));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(5, 3).len(), 6);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn abelian_gives_zero() {
        let lie = LieAlgebra::new(2, &[]).unwrap();
        assert!(bch_generating_function(&lie, 5).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_terminates() {
        let s = bch_generating_function(&LieAlgebra::heisenberg(), 5).unwrap();
        assert_eq!(s.max_order(), 1);
    }

    #[test]
    fn invalid_constants_rejected() {
        let one = Rational::one();
        let lopsided = LieAlgebra::new(2, &[(0, 1, 0, one)]).unwrap();
        assert!(matches!(bch_generating_function(&lopsided, 2), Err(Error::NotAntisymmetric { .. })));
    }
}
