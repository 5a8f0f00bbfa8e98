//! Exact Gauss-Jordan elimination with several right-hand sides.

use num_traits::Zero;

use crate::symbols::Rational;

/// Solution of `A·X = B`, free unknowns set to zero.
pub(crate) enum Solution {
    Solved(Vec<Vec<Rational>>),
    /// Right-hand side column that makes the system inconsistent.
    Inconsistent { column: usize },
}

/// `a` is `rows × cols`, `b` is `rows × rhs`. Pivots are chosen as the first
/// nonzero entry scanning columns left to right, rows top to bottom.
pub(crate) fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>, cols: usize) -> Solution {
    let rows = a.len();
    let rhs = b.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(r) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, r);
        b.swap(rank, r);
        let inv = a[rank][col].recip();
        for v in a[rank].iter_mut().skip(col) {
            *v *= &inv;
        }
        for v in b[rank].iter_mut() {
            *v *= &inv;
        }
        let (pivot_a, pivot_b) = (a[rank].clone(), b[rank].clone());
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (v, p) in a[r].iter_mut().zip(&pivot_a).skip(col) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            for (v, p) in b[r].iter_mut().zip(&pivot_b) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for row in b.iter().skip(rank) {
        if let Some(column) = row.iter().position(|v| !v.is_zero()) {
            return Solution::Inconsistent { column };
        }
    }
    let mut x = vec![vec![Rational::zero(); rhs]; cols];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = b[r].clone();
    }
    Solution::Solved(x)
}
