use std::collections::HashSet;

use super::{Color, RootedTree, TopTree};
use crate::config::Limits;
use crate::Result;

/// Restricts which vertices may appear in enumerated trees.
///
/// `max_degree` returns the largest admissible number of neighbors of a vertex
/// with the given color and weight, or `None` when such a vertex is excluded.
pub trait DegreeBudget {
    fn max_degree(&self, color: Color, weight: u32) -> Option<usize>;
}

/// Admits every vertex with any degree.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unrestricted;

impl DegreeBudget for Unrestricted {
    fn max_degree(&self, _color: Color, _weight: u32) -> Option<usize> {
        Some(usize::MAX)
    }
}

impl<F: Fn(Color, u32) -> Option<usize>> DegreeBudget for F {
    fn max_degree(&self, color: Color, weight: u32) -> Option<usize> {
        self(color, weight)
    }
}

fn color_index(c: Color) -> usize {
    match c {
        Color::White => 0,
        Color::Black => 1,
    }
}

/// Bottom-up table of rooted trees by (root color, role, exact total weight).
/// A tree generated for the "child" role reserves one degree of its root for
/// the edge to its parent.
struct Table {
    // [color][as_child][weight]
    trees: [[Vec<Vec<RootedTree>>; 2]; 2],
}

impl Table {
    fn build<B: DegreeBudget + ?Sized>(max_weight: usize, budget: &B) -> Table {
        let mut table = Table {
            trees: Default::default(),
        };
        for c in 0..2 {
            for role in 0..2 {
                table.trees[c][role] = vec![Vec::new(); max_weight + 1];
            }
        }
        for weight in 1..=max_weight {
            for color in [Color::White, Color::Black] {
                for as_child in [true, false] {
                    let generated = table.generate(color, weight, as_child, budget);
                    table.trees[color_index(color)][as_child as usize][weight] = generated;
                }
            }
        }
        table
    }

    fn generate<B: DegreeBudget + ?Sized>(&self, color: Color, weight: usize, as_child: bool, budget: &B) -> Vec<RootedTree> {
        let mut out = Vec::new();
        let child_color = color.opposite();
        for root_weight in 1..=weight {
            let Some(max_degree) = budget.max_degree(color, root_weight as u32) else {
                continue;
            };
            let capacity = if as_child {
                match max_degree.checked_sub(1) {
                    Some(c) => c,
                    None => continue,
                }
            } else {
                max_degree
            };
            let rest = weight - root_weight;
            if rest == 0 {
                out.push(RootedTree::leaf(color, root_weight as u32).expect("positive weight"));
                continue;
            }
            if capacity == 0 {
                continue;
            }
            let pool: Vec<&RootedTree> = (1..=rest)
                .flat_map(|w| self.trees[color_index(child_color)][1][w].iter())
                .collect();
            let mut chosen = Vec::new();
            choose_children(&pool, 0, rest, capacity, &mut chosen, &mut |children| {
                out.push(
                    RootedTree::graft(children.iter().map(|&t| t.clone()).collect(), color, root_weight as u32)
                        .expect("children have the opposite color"),
                );
            });
        }
        out
    }
}

/// Enumerates multisets (as nondecreasing index sequences into `pool`, which
/// is sorted by total weight) whose weights sum to `remaining`.
fn choose_children<'a>(
    pool: &[&'a RootedTree],
    start: usize,
    remaining: usize,
    capacity: usize,
    chosen: &mut Vec<&'a RootedTree>,
    emit: &mut dyn FnMut(&[&'a RootedTree]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    if capacity == 0 {
        return;
    }
    for i in start..pool.len() {
        let w = pool[i].total_weight();
        if w > remaining {
            break;
        }
        chosen.push(pool[i]);
        choose_children(pool, i, remaining - w, capacity - 1, chosen, emit);
        chosen.pop();
    }
}

fn sort_trees(trees: &mut [RootedTree]) {
    trees.sort_by(|a, b| {
        (a.total_weight(), a.vertex_count(), a.encoding()).cmp(&(b.total_weight(), b.vertex_count(), b.encoding()))
    });
}

/// All rooted weighted bipartite trees with `‖t‖ ≤ max_total_weight`, one per
/// isomorphism class, ordered by total weight, vertex count and encoding.
pub fn enumerate_rooted(max_total_weight: usize, root_color: Option<Color>) -> Result<Vec<RootedTree>> {
    enumerate_rooted_with(max_total_weight, root_color, &Unrestricted, &Limits::default())
}

pub fn enumerate_rooted_with<B: DegreeBudget + ?Sized>(
    max_total_weight: usize,
    root_color: Option<Color>,
    budget: &B,
    limits: &Limits,
) -> Result<Vec<RootedTree>> {
    limits.check_tree_weight(max_total_weight)?;
    let table = Table::build(max_total_weight, budget);
    let mut out: Vec<RootedTree> = Vec::new();
    for color in [Color::White, Color::Black] {
        if root_color.is_some_and(|c| c != color) {
            continue;
        }
        for w in 1..=max_total_weight {
            out.extend(table.trees[color_index(color)][0][w].iter().cloned());
        }
    }
    sort_trees(&mut out);
    Ok(out)
}

/// All unrooted weighted bipartite trees with `‖t‖ ≤ max_total_weight`.
pub fn enumerate_unrooted(max_total_weight: usize) -> Result<Vec<TopTree>> {
    enumerate_unrooted_with(max_total_weight, &Unrestricted, &Limits::default())
}

pub fn enumerate_unrooted_with<B: DegreeBudget + ?Sized>(
    max_total_weight: usize,
    budget: &B,
    limits: &Limits,
) -> Result<Vec<TopTree>> {
    let rooted = enumerate_rooted_with(max_total_weight, None, budget, limits)?;
    let mut seen = HashSet::new();
    let mut out: Vec<TopTree> = Vec::new();
    for t in &rooted {
        let top = t.forget_root();
        if seen.insert(top.encoding().to_string()) {
            out.push(top);
        }
    }
    out.sort_by(|a, b| {
        (a.total_weight(), a.vertex_count(), a.encoding()).cmp(&(b.total_weight(), b.vertex_count(), b.encoding()))
    });
    Ok(out)
}
