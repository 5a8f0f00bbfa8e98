use serde::{Deserialize, Serialize};

use crate::symbols::json::{poly_from_terms, poly_to_terms, TermDoc};
use crate::symbols::{PolySymbol, Rational, Shape};
use crate::{Error, Result};

/// Bivector `α^{ij}(x)` with polynomial entries in the base variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    dim: usize,
    matrix: Vec<Vec<PolySymbol>>,
}

impl PoissonStructure {
    pub fn zero(dim: usize) -> PoissonStructure {
        let base = Shape::new(dim, 0);
        PoissonStructure {
            dim,
            matrix: vec![vec![PolySymbol::zero(base); dim]; dim],
        }
    }

    /// Antisymmetric structure from its entries above the diagonal
    /// (zero-based `i < j`).
    pub fn from_upper(dim: usize, entries: impl IntoIterator<Item = ((usize, usize), PolySymbol)>) -> Result<PoissonStructure> {
        let mut out = PoissonStructure::zero(dim);
        for ((i, j), f) in entries {
            if i >= j || j >= dim {
                return Err(Error::OutOfRange(format!("entry ({}, {}) is not above the diagonal of a {dim}x{dim} matrix", i + 1, j + 1)));
            }
            if f.shape() != out.base_shape() {
                return Err(Error::ShapeMismatch(format!("entry over {:?}, expected base variables only", f.shape())));
            }
            out.matrix[j][i] = -&f;
            out.matrix[i][j] = f;
        }
        Ok(out)
    }

    /// Constant structure from `(i, j, α^{ij})` with zero-based `i < j`.
    pub fn constant(dim: usize, entries: &[(usize, usize, Rational)]) -> Result<PoissonStructure> {
        let base = Shape::new(dim, 0);
        PoissonStructure::from_upper(
            dim,
            entries.iter().map(|(i, j, c)| ((*i, *j), PolySymbol::constant(base, c.clone()))),
        )
    }

    /// Arbitrary matrix, not checked; see [`validate_poisson`].
    pub fn from_matrix(matrix: Vec<Vec<PolySymbol>>) -> Result<PoissonStructure> {
        let dim = matrix.len();
        let base = Shape::new(dim, 0);
        if matrix.iter().any(|row| row.len() != dim || row.iter().any(|f| f.shape() != base)) {
            return Err(Error::ShapeMismatch("matrix must be square over the base variables".into()));
        }
        Ok(PoissonStructure { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_shape(&self) -> Shape {
        Shape::new(self.dim, 0)
    }

    pub fn entry(&self, i: usize, j: usize) -> &PolySymbol {
        &self.matrix[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(PolySymbol::is_zero)
    }

    /// Largest total degree among the entries.
    pub fn max_degree(&self) -> usize {
        self.matrix.iter().flatten().map(PolySymbol::total_degree).max().unwrap_or(0)
    }

    /// The entry with its base variables placed in a larger shape.
    pub fn entry_in(&self, i: usize, j: usize, target: Shape) -> PolySymbol {
        let images: Vec<PolySymbol> = (0..self.dim)
            .map(|k| PolySymbol::variable(target, target.x_var(k)))
            .collect();
        self.matrix[i][j]
            .substitute(&images, target)
            .expect("base variables map into any shape of the same dimension")
    }

    pub fn to_json(&self) -> String {
        let doc = PoissonDoc {
            dim: self.dim,
            entries: (0..self.dim)
                .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
                .filter(|&(i, j)| !self.matrix[i][j].is_zero())
                .map(|(i, j)| EntryDoc {
                    i: i + 1,
                    j: j + 1,
                    terms: poly_to_terms(&self.matrix[i][j]),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("Poisson documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<PoissonStructure> {
        let doc: PoissonDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let base = Shape::new(doc.dim, 0);
        let mut entries = Vec::with_capacity(doc.entries.len());
        for e in &doc.entries {
            if e.i == 0 || e.i >= e.j || e.j > doc.dim {
                return Err(Error::Parse(format!("entry ({}, {}) must satisfy 1 <= i < j <= {}", e.i, e.j, doc.dim)));
            }
            entries.push(((e.i - 1, e.j - 1), poly_from_terms(base, &e.terms)?));
        }
        PoissonStructure::from_upper(doc.dim, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    i: usize,
    j: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct PoissonDoc {
    dim: usize,
    entries: Vec<EntryDoc>,
}

/// Outcome of [`validate_poisson`]; indices are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PoissonReport {
    pub antisymmetry_failure: Option<(usize, usize)>,
    pub jacobi_failure: Option<(usize, usize, usize)>,
}

impl PoissonReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_failure.is_none() && self.jacobi_failure.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        if let Some((i, j)) = self.antisymmetry_failure {
            return Err(Error::NotAntisymmetric { i, j });
        }
        if let Some((i, j, k)) = self.jacobi_failure {
            return Err(Error::JacobiFailure { i, j, k });
        }
        Ok(())
    }
}

/// `Σ_m α^{im}∂_m α^{jk} + α^{jm}∂_m α^{ki} + α^{km}∂_m α^{ij}`.
pub fn jacobiator(alpha: &PoissonStructure, i: usize, j: usize, k: usize) -> PolySymbol {
    let base = alpha.base_shape();
    let mut acc = PolySymbol::zero(base);
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        for m in 0..alpha.dim {
            let lhs = alpha.entry(a, m);
            if lhs.is_zero() {
                continue;
            }
            acc.add_assign_ref(&(lhs * &alpha.entry(b, c).partial(base.x_var(m))));
        }
    }
    acc
}

/// Checks antisymmetry and the Jacobi identity exactly and reports the
/// first failing index pair or triple.
pub fn validate_poisson(alpha: &PoissonStructure) -> PoissonReport {
    let mut report = PoissonReport::default();
    let d = alpha.dim;
    'anti: for i in 0..d {
        for j in i..d {
            if alpha.entry(i, j) != &-alpha.entry(j, i) {
                report.antisymmetry_failure = Some((i + 1, j + 1));
                break 'anti;
            }
        }
    }
    if report.antisymmetry_failure.is_some() {
        return report;
    }
    'jacobi: for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                if !jacobiator(alpha, i, j, k).is_zero() {
                    report.jacobi_failure = Some((i + 1, j + 1, k + 1));
                    break 'jacobi;
                }
            }
        }
    }
    report
}
