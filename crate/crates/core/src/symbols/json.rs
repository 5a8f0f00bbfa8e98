//! JSON interchange for series. Indices are 1-based, coefficients are
//! fraction strings such as `"-3/4"` (integers may omit the denominator on
//! input; output always carries one).

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::poly::{Monomial, PolySymbol, Rational, Shape};
use super::series::FormalSeries;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermDoc {
    pub coeff: String,
    #[serde(default)]
    pub p: Vec<[usize; 3]>,
    #[serde(default)]
    pub x: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderDoc {
    pub order: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesDoc {
    pub arity: usize,
    pub dim: usize,
    pub graded: bool,
    pub orders: Vec<OrderDoc>,
}

pub fn format_rational(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("coefficient {s:?} must be a fraction")));
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
}

pub(crate) fn term_doc(shape: Shape, m: &Monomial, c: &Rational) -> TermDoc {
    let mut p = Vec::new();
    let mut x = Vec::new();
    for (v, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        match shape.p_position(v) {
            Some((b, i)) => p.push([b + 1, i + 1, e as usize]),
            None => x.push([shape.comp(v) + 1, e as usize]),
        }
    }
    TermDoc {
        coeff: format_rational(c),
        p,
        x,
    }
}

pub(crate) fn term_from_doc(shape: Shape, t: &TermDoc) -> Result<(Monomial, Rational)> {
    let mut exps = vec![0u8; shape.var_count()];
    let mut bump = |v: usize, e: usize| -> Result<()> {
        let total = exps[v] as usize + e;
        exps[v] = u8::try_from(total).map_err(|_| Error::Parse(format!("exponent {total} too large")))?;
        Ok(())
    };
    for &[b, i, e] in &t.p {
        if b == 0 || b > shape.blocks || i == 0 || i > shape.dim {
            return Err(Error::Parse(format!("p index [{b},{i}] outside {} blocks of dim {}", shape.blocks, shape.dim)));
        }
        bump(shape.p_var(b - 1, i - 1), e)?;
    }
    for &[i, e] in &t.x {
        if i == 0 || i > shape.dim {
            return Err(Error::Parse(format!("x index {i} outside dim {}", shape.dim)));
        }
        bump(shape.x_var(i - 1), e)?;
    }
    Ok((Monomial::from_exponents(&exps), parse_rational(&t.coeff)?))
}

pub fn poly_to_terms(f: &PolySymbol) -> Vec<TermDoc> {
    f.terms().map(|(m, c)| term_doc(f.shape(), m, c)).collect()
}

pub fn poly_from_terms(shape: Shape, terms: &[TermDoc]) -> Result<PolySymbol> {
    let parsed = terms
        .iter()
        .map(|t| term_from_doc(shape, t))
        .collect::<Result<Vec<_>>>()?;
    PolySymbol::from_terms(shape, parsed)
}

impl From<&FormalSeries> for SeriesDoc {
    fn from(s: &FormalSeries) -> SeriesDoc {
        SeriesDoc {
            arity: s.arity(),
            dim: s.dim(),
            graded: s.is_graded(),
            orders: s
                .orders()
                .map(|(i, f)| OrderDoc {
                    order: i,
                    terms: poly_to_terms(f),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesDoc> for FormalSeries {
    type Error = Error;

    fn try_from(doc: &SeriesDoc) -> Result<FormalSeries> {
        if doc.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let shape = Shape::new(doc.dim, doc.arity);
        let orders = doc
            .orders
            .iter()
            .map(|o| Ok((o.order, poly_from_terms(shape, &o.terms)?)))
            .collect::<Result<Vec<_>>>()?;
        FormalSeries::from_orders(shape, doc.graded, orders)
    }
}

pub fn series_to_json(s: &FormalSeries) -> String {
    serde_json::to_string_pretty(&SeriesDoc::from(s)).expect("series documents always serialize")
}

pub fn series_from_json(text: &str) -> Result<FormalSeries> {
    let doc: SeriesDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    FormalSeries::try_from(&doc)
}
