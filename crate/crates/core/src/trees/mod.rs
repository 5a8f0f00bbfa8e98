//! Weighted bipartite trees.
//!
//! Vertices are colored white (`w`, the side of the inner function) or black
//! (`b`, the side of the outer function) and carry a positive integer weight.
//! Adjacent vertices always have different colors. A [`RootedTree`] keeps its
//! children sorted by canonical encoding, so structural equality coincides
//! with isomorphism of rooted weighted bipartite trees. A [`TopTree`] is the
//! unrooted class, represented by its lexicographically minimal rooting.

mod enumerate;
mod labeled;

pub use enumerate::{
    enumerate_rooted, enumerate_rooted_with, enumerate_unrooted, enumerate_unrooted_with,
    DegreeBudget, Unrestricted,
};
pub use labeled::LabeledTree;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    /// `∘`: vertices evaluated with the inner (x-side) functions.
    White,
    /// `•`: vertices evaluated with the outer (p-side) functions.
    Black,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::White => 'w',
            Color::Black => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Color> {
        match c {
            'w' => Some(Color::White),
            'b' => Some(Color::Black),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A rooted weighted bipartite tree, immutable once built.
#[derive(Clone, Debug)]
pub struct RootedTree {
    color: Color,
    weight: u32,
    children: Vec<RootedTree>,
    encoding: String,
    vertex_count: usize,
    total_weight: usize,
}

impl RootedTree {
    /// Single-vertex tree.
    pub fn leaf(color: Color, weight: u32) -> Result<RootedTree> {
        RootedTree::graft(Vec::new(), color, weight)
    }

    /// Connects the roots of `children` to a new root of the given color and
    /// weight. Children are stored in canonical order.
    pub fn graft(mut children: Vec<RootedTree>, color: Color, weight: u32) -> Result<RootedTree> {
        if weight == 0 {
            return Err(Error::ZeroWeight);
        }
        if children.iter().any(|c| c.color == color) {
            return Err(Error::ColorClash(color.letter()));
        }
        children.sort_by(|a, b| a.encoding.cmp(&b.encoding));
        let mut encoding = format!("{}{}", color.letter(), weight);
        if !children.is_empty() {
            encoding.push('(');
            for (k, c) in children.iter().enumerate() {
                if k > 0 {
                    encoding.push(',');
                }
                encoding.push_str(&c.encoding);
            }
            encoding.push(')');
        }
        let vertex_count = 1 + children.iter().map(|c| c.vertex_count).sum::<usize>();
        let total_weight = weight as usize + children.iter().map(|c| c.total_weight).sum::<usize>();
        Ok(RootedTree {
            color,
            weight,
            children,
            encoding,
            vertex_count,
            total_weight,
        })
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    /// Canonical text encoding, e.g. `b2(w1,w1(b3))`.
    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    /// `|t|`
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `‖t‖`, the sum of all vertex weights.
    pub fn total_weight(&self) -> usize {
        self.total_weight
    }

    /// Symmetry coefficient from the recursion `σ = Π μ_i! · Π σ(t̃_i)` over
    /// the distinct child classes `t̃_i` with multiplicities `μ_i`.
    pub fn symmetry_coefficient(&self) -> u64 {
        let mut sigma = 1u64;
        let mut run = 0u64;
        for (k, child) in self.children.iter().enumerate() {
            sigma *= child.symmetry_coefficient();
            if k > 0 && self.children[k - 1].encoding == child.encoding {
                run += 1;
            } else {
                run = 1;
            }
            sigma *= run;
        }
        sigma
    }

    /// Brute-force count of root-preserving automorphisms.
    pub fn automorphism_count(&self) -> Result<u64> {
        LabeledTree::from_rooted(self).automorphism_count()
    }

    /// Butcher product `u∘v`: grafts the root of `v` onto the root of `u`.
    pub fn butcher_product(&self, other: &RootedTree) -> Result<RootedTree> {
        if self.color == other.color {
            return Err(Error::ColorClash(self.color.letter()));
        }
        let mut children = self.children.clone();
        children.push(other.clone());
        RootedTree::graft(children, self.color, self.weight)
    }

    pub fn forget_root(&self) -> TopTree {
        TopTree::from_rooted(self)
    }

    /// The same underlying tree rooted at each of its vertices in turn.
    pub fn rootings(&self) -> Vec<RootedTree> {
        let labeled = LabeledTree::from_rooted(self);
        (0..labeled.len()).map(|v| labeled.rooted_at(v)).collect()
    }
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.encoding == other.encoding
    }
}

impl Eq for RootedTree {}

impl Hash for RootedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.encoding.hash(state);
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encoding.cmp(&other.encoding)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

impl FromStr for RootedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<RootedTree> {
        let bytes: Vec<char> = s.trim().chars().collect();
        let mut pos = 0;
        let tree = parse_node(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input at {pos} in {s:?}")));
        }
        Ok(tree)
    }
}

fn parse_node(s: &[char], pos: &mut usize) -> Result<RootedTree> {
    let color = s
        .get(*pos)
        .and_then(|&c| Color::from_letter(c))
        .ok_or_else(|| Error::Parse(format!("expected color letter at {}", *pos)))?;
    *pos += 1;
    let start = *pos;
    while *pos < s.len() && s[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let digits: String = s[start..*pos].iter().collect();
    let weight: u32 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("expected weight at {start}")))?;
    let mut children = Vec::new();
    if s.get(*pos) == Some(&'(') {
        *pos += 1;
        loop {
            children.push(parse_node(s, pos)?);
            match s.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => {
                    *pos += 1;
                    break;
                }
                _ => return Err(Error::Parse(format!("expected ',' or ')' at {}", *pos))),
            }
        }
    }
    RootedTree::graft(children, color, weight)
}

/// Unrooted isomorphism class of a weighted bipartite tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopTree {
    canonical: RootedTree,
}

impl TopTree {
    pub fn from_rooted(t: &RootedTree) -> TopTree {
        let canonical = t
            .rootings()
            .into_iter()
            .min_by(|a, b| a.encoding.cmp(&b.encoding))
            .expect("a tree has at least one vertex");
        TopTree { canonical }
    }

    /// The minimal rooted representative.
    pub fn canonical(&self) -> &RootedTree {
        &self.canonical
    }

    pub fn encoding(&self) -> &str {
        self.canonical.encoding()
    }

    pub fn vertex_count(&self) -> usize {
        self.canonical.vertex_count
    }

    pub fn total_weight(&self) -> usize {
        self.canonical.total_weight
    }

    /// Number of automorphisms of the unrooted tree, `|sym(t)|`.
    ///
    /// Computed as `σ(t_r) · #{v : t_v ≅ t_r}` for the canonical root `r`,
    /// i.e. stabilizer size times orbit size.
    pub fn symmetry_coefficient(&self) -> u64 {
        let orbit = self
            .canonical
            .rootings()
            .iter()
            .filter(|r| r.encoding == self.canonical.encoding)
            .count() as u64;
        self.canonical.symmetry_coefficient() * orbit
    }

    /// Brute-force count of all automorphisms of the unrooted tree.
    pub fn automorphism_count(&self) -> Result<u64> {
        LabeledTree::from_rooted(&self.canonical)
            .unrooted()
            .automorphism_count()
    }
}

impl fmt::Display for TopTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}
