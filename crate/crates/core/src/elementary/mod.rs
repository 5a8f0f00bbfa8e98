//! Elementary differentials `DC_t(F, G)` and elementary functions `C_t(F, G)`.
//!
//! Black vertices of weight `j` stand for `F^{(j)}`, differentiated in the
//! covector variables; white vertices of weight `i` stand for `G^{(i)}`,
//! differentiated in the base variables. Both collections act on the same
//! flattened dimension `m`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::symbols::contract::Contractor;
use crate::symbols::{FormalSeries, PolySymbol, Shape};
use crate::trees::{Color, DegreeBudget, RootedTree, TopTree};
use crate::{Error, Result};

/// Which kind of displacement a vector of symbols represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// A covector displacement, such as `∇_x G`.
    P,
    /// A base displacement, such as `∇_p F`.
    X,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcVector {
    pub slot: Slot,
    pub components: Vec<PolySymbol>,
}

impl DcVector {
    /// `Σ_a u[a]·v[a]`; only a covector and a base vector may be paired.
    pub fn pair(&self, other: &DcVector) -> Result<PolySymbol> {
        if self.slot == other.slot {
            return Err(Error::ShapeMismatch(format!("cannot pair two {:?}-slot vectors", self.slot)));
        }
        if self.components.len() != other.components.len() {
            return Err(Error::ShapeMismatch(format!(
                "lengths {} and {}",
                self.components.len(),
                other.components.len()
            )));
        }
        let mut acc = match self.components.first() {
            Some(c) => PolySymbol::zero(c.shape()),
            None => return Err(Error::ShapeMismatch("empty vectors".into())),
        };
        for (a, b) in self.components.iter().zip(&other.components) {
            acc.add_assign_ref(&a.try_mul(b)?);
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(PolySymbol::is_zero)
    }
}

/// One summand of a collection: per-order symbols over their own shape, with
/// the rule that maps their variables into the common result ring.
pub(crate) struct Piece {
    contractor: Contractor,
    orders: BTreeMap<usize, PolySymbol>,
}

impl Piece {
    pub(crate) fn new(contractor: Contractor, series: &FormalSeries) -> Piece {
        Piece {
            contractor,
            orders: series.orders().map(|(i, f)| (i, f.clone())).collect(),
        }
    }

    fn max_degree(&self, order: usize) -> Option<usize> {
        self.orders.get(&order).map(|f| self.contractor.max_degree(f))
    }
}

/// The data `(F, G)` the trees are evaluated on.
pub struct SeriesPair {
    m: usize,
    target: Shape,
    f_pieces: Vec<Piece>,
    g_pieces: Vec<Piece>,
    dc_cache: RefCell<HashMap<String, Rc<DcVector>>>,
}

impl SeriesPair {
    /// `F` and `G` over the same arity-1 shape of dimension `m`: `F` is
    /// differentiated in `p`, `G` in `x`, and results stay in that shape.
    pub fn new(f: &FormalSeries, g: &FormalSeries) -> Result<SeriesPair> {
        let shape = f.shape();
        if shape != g.shape() || shape.blocks != 1 {
            return Err(Error::ShapeMismatch(format!(
                "F over {:?} and G over {:?}; both must have one covector block of the same dimension",
                f.shape(),
                g.shape()
            )));
        }
        let m = shape.dim;
        let identity: Vec<PolySymbol> = (0..shape.var_count()).map(|v| PolySymbol::variable(shape, v)).collect();
        let mut f_slots = vec![None; shape.var_count()];
        let mut g_slots = vec![None; shape.var_count()];
        for a in 0..m {
            f_slots[shape.p_var(0, a)] = Some(a);
            g_slots[shape.x_var(a)] = Some(a);
        }
        let fp = Piece::new(Contractor::new(shape, f_slots, identity.clone(), shape), f);
        let gp = Piece::new(Contractor::new(shape, g_slots, identity, shape), g);
        Ok(SeriesPair::from_pieces(shape, m, vec![fp], vec![gp]))
    }

    pub(crate) fn from_pieces(target: Shape, m: usize, f_pieces: Vec<Piece>, g_pieces: Vec<Piece>) -> SeriesPair {
        SeriesPair {
            m,
            target,
            f_pieces,
            g_pieces,
            dc_cache: RefCell::new(HashMap::new()),
        }
    }

    /// Flattened dimension of the direction vectors.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// The ring every elementary function lives in.
    pub fn target(&self) -> Shape {
        self.target
    }

    fn pieces(&self, color: Color) -> &[Piece] {
        match color {
            Color::Black => &self.f_pieces,
            Color::White => &self.g_pieces,
        }
    }

    /// `DC_t(F, G)`, memoized by encoding.
    pub fn elementary_differential(&self, t: &RootedTree) -> DcVector {
        (*self.dc(t)).clone()
    }

    fn dc(&self, t: &RootedTree) -> Rc<DcVector> {
        if let Some(hit) = self.dc_cache.borrow().get(t.encoding()) {
            return Rc::clone(hit);
        }
        let children: Vec<Rc<DcVector>> = t.children().iter().map(|c| self.dc(c)).collect();
        let slot = match t.color() {
            Color::Black => Slot::X,
            Color::White => Slot::P,
        };
        let mut components = vec![PolySymbol::zero(self.target); self.m];
        if children.iter().all(|c| !c.is_zero()) {
            let dirs: Vec<&[PolySymbol]> = children.iter().map(|c| c.components.as_slice()).collect();
            for piece in self.pieces(t.color()) {
                if let Some(f) = piece.orders.get(&(t.weight() as usize)) {
                    let part = piece.contractor.contract_free(f, &dirs, self.m);
                    for (acc, p) in components.iter_mut().zip(&part) {
                        acc.add_assign_ref(p);
                    }
                }
            }
        }
        let value = Rc::new(DcVector { slot, components });
        self.dc_cache
            .borrow_mut()
            .insert(t.encoding().to_string(), Rc::clone(&value));
        value
    }

    /// `C_t(F, G)` evaluated at the root of `t`.
    pub fn elementary_function(&self, t: &RootedTree) -> PolySymbol {
        let children: Vec<Rc<DcVector>> = t.children().iter().map(|c| self.dc(c)).collect();
        let mut out = PolySymbol::zero(self.target);
        if children.iter().any(|c| c.is_zero()) {
            return out;
        }
        let dirs: Vec<&[PolySymbol]> = children.iter().map(|c| c.components.as_slice()).collect();
        for piece in self.pieces(t.color()) {
            if let Some(f) = piece.orders.get(&(t.weight() as usize)) {
                out.add_assign_ref(&piece.contractor.contract(f, &dirs));
            }
        }
        out
    }

    /// `C_t(F, G)` for an unrooted class, computed at its canonical root.
    pub fn elementary_function_top(&self, t: &TopTree) -> PolySymbol {
        self.elementary_function(t.canonical())
    }
}

/// A vertex may carry at most as many edges as its symbol has derivatives
/// that do not vanish; vertices referencing absent orders are excluded.
impl DegreeBudget for SeriesPair {
    fn max_degree(&self, color: Color, weight: u32) -> Option<usize> {
        self.pieces(color)
            .iter()
            .filter_map(|p| p.max_degree(weight as usize))
            .max()
    }
}
