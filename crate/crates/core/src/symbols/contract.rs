//! Contracted higher derivatives followed by substitution into a target ring.
//!
//! The tree expansion needs `∇^{(m)}f(u_1, …, u_m)` evaluated at a base
//! point, where the direction vectors already live in the ring of the final
//! result. [`Contractor`] does both in one pass over the monomials of `f`:
//! derivatives act on the contracted variables, the remaining factors are
//! replaced by their images.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::One;

use super::poly::{integer, Monomial, PolySymbol, Rational, Shape};

pub(crate) struct Contractor {
    source: Shape,
    target: Shape,
    /// Flattened contraction index of each source variable, if contracted.
    slot_of: Vec<Option<usize>>,
    contracted: Vec<usize>,
    images: Vec<PolySymbol>,
    cache: RefCell<HashMap<Monomial, PolySymbol>>,
}

impl Contractor {
    pub(crate) fn new(source: Shape, slot_of: Vec<Option<usize>>, images: Vec<PolySymbol>, target: Shape) -> Self {
        assert_eq!(slot_of.len(), source.var_count());
        assert_eq!(images.len(), source.var_count());
        debug_assert!(images.iter().all(|i| i.shape() == target));
        let contracted = (0..slot_of.len()).filter(|&v| slot_of[v].is_some()).collect();
        Contractor {
            source,
            target,
            slot_of,
            contracted,
            images,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Largest number of derivatives in the contracted variables that does
    /// not annihilate `f`.
    pub(crate) fn max_degree(&self, f: &PolySymbol) -> usize {
        f.max_degree_in(&self.contracted)
    }

    fn image(&self, m: &Monomial) -> PolySymbol {
        if let Some(hit) = self.cache.borrow().get(m) {
            return hit.clone();
        }
        let value = match m.exponents().iter().position(|&e| e > 0) {
            None => PolySymbol::one(self.target),
            Some(v) => {
                let mut lower = m.clone();
                lower.set_exponent(v, m.exponent(v) - 1);
                &self.image(&lower) * &self.images[v]
            }
        };
        self.cache.borrow_mut().insert(m.clone(), value.clone());
        value
    }

    /// `Σ ∂^k f / ∂w_{a_1}…∂w_{a_k} · u_1[a_1] ⋯ u_k[a_k]`, substituted.
    pub(crate) fn contract(&self, f: &PolySymbol, dirs: &[&[PolySymbol]]) -> PolySymbol {
        let mut out = vec![PolySymbol::zero(self.target)];
        self.run(f, dirs, false, &mut out);
        out.pop().expect("one output slot")
    }

    /// Like [`Contractor::contract`] with one extra derivative left free:
    /// component `a` of the result is the contraction with `e_a` appended.
    pub(crate) fn contract_free(&self, f: &PolySymbol, dirs: &[&[PolySymbol]], width: usize) -> Vec<PolySymbol> {
        let mut out = vec![PolySymbol::zero(self.target); width];
        self.run(f, dirs, true, &mut out);
        out
    }

    fn run(&self, f: &PolySymbol, dirs: &[&[PolySymbol]], free: bool, out: &mut [PolySymbol]) {
        debug_assert_eq!(f.shape(), self.source);
        for (m, c) in f.terms() {
            let needed = dirs.len() + free as usize;
            if m.degree_in(self.contracted.iter().copied()) < needed {
                continue;
            }
            let mut rem = m.clone();
            self.walk(&mut rem, dirs, 0, 1, None, c, free, out);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        rem: &mut Monomial,
        dirs: &[&[PolySymbol]],
        k: usize,
        factor: u64,
        acc: Option<&PolySymbol>,
        coeff: &Rational,
        free: bool,
        out: &mut [PolySymbol],
    ) {
        if k == dirs.len() {
            if !free {
                let term = self.with_acc(rem, acc);
                out[0].add_scaled(&term, &(coeff * integer(factor as i64)));
                return;
            }
            for &v in &self.contracted {
                let e = rem.exponent(v);
                if e == 0 {
                    continue;
                }
                let a = self.slot_of[v].expect("contracted variable");
                rem.set_exponent(v, e - 1);
                let term = self.with_acc(rem, acc);
                rem.set_exponent(v, e);
                out[a].add_scaled(&term, &(coeff * integer((factor * e as u64) as i64)));
            }
            return;
        }
        for &v in &self.contracted {
            let e = rem.exponent(v);
            if e == 0 {
                continue;
            }
            let a = self.slot_of[v].expect("contracted variable");
            let direction = &dirs[k][a];
            if direction.is_zero() {
                continue;
            }
            let next = match acc {
                None => direction.clone(),
                Some(prev) => prev * direction,
            };
            rem.set_exponent(v, e - 1);
            self.walk(rem, dirs, k + 1, factor * e as u64, Some(&next), coeff, free, out);
            rem.set_exponent(v, e);
        }
    }

    fn with_acc(&self, rem: &Monomial, acc: Option<&PolySymbol>) -> PolySymbol {
        let image = self.image(rem);
        match acc {
            None => image,
            Some(a) => {
                if image.len() == 1 && image.terms().next().is_some_and(|(m, c)| m.is_one() && c.is_one()) {
                    a.clone()
                } else {
                    a * &image
                }
            }
        }
    }
}
