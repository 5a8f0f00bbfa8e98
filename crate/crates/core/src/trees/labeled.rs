use std::collections::HashSet;

use super::{Color, RootedTree};
use crate::config::BRUTE_FORCE_VERTEX_LIMIT;
use crate::{Error, Result};

/// Largest vertex count for which all labelings are enumerated explicitly.
pub const LABELING_VERTEX_LIMIT: usize = 8;

/// Vertex labels, sorted edges and root of a relabeled tree.
type Relabeling = (Vec<(Color, u32)>, Vec<(usize, usize)>, Option<usize>);

/// A tree on the vertex set `{0, …, n−1}` with explicit adjacency lists.
///
/// This is the representative-level view used for re-rooting and for the
/// brute-force checks of the recursive symmetry formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTree {
    colors: Vec<Color>,
    weights: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    root: Option<usize>,
}

impl LabeledTree {
    /// Labels vertices in depth-first preorder; the root gets label 0.
    pub fn from_rooted(t: &RootedTree) -> LabeledTree {
        let mut tree = LabeledTree {
            colors: Vec::with_capacity(t.vertex_count()),
            weights: Vec::with_capacity(t.vertex_count()),
            adjacency: Vec::with_capacity(t.vertex_count()),
            root: Some(0),
        };
        tree.push_subtree(t, None);
        tree
    }

    fn push_subtree(&mut self, t: &RootedTree, parent: Option<usize>) {
        let id = self.colors.len();
        self.colors.push(t.color());
        self.weights.push(t.weight());
        self.adjacency.push(Vec::new());
        if let Some(p) = parent {
            self.adjacency[p].push(id);
            self.adjacency[id].push(p);
        }
        for child in t.children() {
            self.push_subtree(child, Some(id));
        }
    }

    /// Builds a labeled tree from explicit data, validating the bipartite
    /// condition and connectivity.
    pub fn new(colors: Vec<Color>, weights: Vec<u32>, edges: &[(usize, usize)], root: Option<usize>) -> Result<LabeledTree> {
        let n = colors.len();
        if weights.len() != n {
            return Err(Error::ShapeMismatch("colors and weights differ in length".into()));
        }
        if weights.contains(&0) {
            return Err(Error::ZeroWeight);
        }
        if n == 0 || edges.len() + 1 != n {
            return Err(Error::ShapeMismatch(format!("{n} vertices need {} edges", n.saturating_sub(1))));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::OutOfRange(format!("edge ({u}, {v})")));
            }
            if colors[u] == colors[v] {
                return Err(Error::ColorClash(colors[u].letter()));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let tree = LabeledTree {
            colors,
            weights,
            adjacency,
            root,
        };
        if tree.reachable_from(0) != n {
            return Err(Error::ShapeMismatch("edges do not form a tree".into()));
        }
        Ok(tree)
    }

    fn reachable_from(&self, start: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        count
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Drops the distinguished root.
    pub fn unrooted(mut self) -> LabeledTree {
        self.root = None;
        self
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.len().saturating_sub(1));
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    /// The rooted tree obtained by declaring `v` the root.
    pub fn rooted_at(&self, v: usize) -> RootedTree {
        self.subtree(v, usize::MAX)
    }

    fn subtree(&self, v: usize, parent: usize) -> RootedTree {
        let children = self.adjacency[v]
            .iter()
            .filter(|&&u| u != parent)
            .map(|&u| self.subtree(u, v))
            .collect();
        RootedTree::graft(children, self.colors[v], self.weights[v])
            .expect("labeled trees are bipartite with positive weights")
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    /// Counts vertex permutations preserving edges, colors, weights and (if
    /// present) the root, by backtracking over partial permutations.
    pub fn automorphism_count(&self) -> Result<u64> {
        let n = self.len();
        if n > BRUTE_FORCE_VERTEX_LIMIT {
            return Err(Error::TreeTooLarge {
                vertices: n,
                limit: BRUTE_FORCE_VERTEX_LIMIT,
            });
        }
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        Ok(self.extend_automorphism(0, &mut image, &mut used))
    }

    fn extend_automorphism(&self, v: usize, image: &mut [usize], used: &mut [bool]) -> u64 {
        let n = self.len();
        if v == n {
            return 1;
        }
        let mut count = 0;
        for target in 0..n {
            if used[target] || self.colors[target] != self.colors[v] || self.weights[target] != self.weights[v] {
                continue;
            }
            if let Some(r) = self.root {
                if (v == r) != (target == r) {
                    continue;
                }
            }
            let consistent = (0..v).all(|u| self.is_edge(u, v) == self.is_edge(image[u], target));
            if !consistent {
                continue;
            }
            image[v] = target;
            used[target] = true;
            count += self.extend_automorphism(v + 1, image, used);
            used[target] = false;
        }
        image[v] = usize::MAX;
        count
    }

    /// Number of distinct labeled trees on `{0, …, n−1}` isomorphic to this
    /// one, found by applying every permutation and collecting the results.
    pub fn labeling_count(&self) -> Result<u64> {
        let n = self.len();
        if n > LABELING_VERTEX_LIMIT {
            return Err(Error::TreeTooLarge {
                vertices: n,
                limit: LABELING_VERTEX_LIMIT,
            });
        }
        let edges = self.edges();
        let mut seen: HashSet<Relabeling> = HashSet::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut labels = vec![(Color::White, 0u32); n];
            for v in 0..n {
                labels[perm[v]] = (self.colors[v], self.weights[v]);
            }
            let mut relabeled: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (perm[u], perm[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            relabeled.sort_unstable();
            seen.insert((labels, relabeled, self.root.map(|r| perm[r])));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(seen.len() as u64)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count() {
        let mut p: Vec<usize> = (0..4).collect();
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 24);
    }

    #[test]
    fn explicit_construction_validates() {
        use Color::*;
        let ok = LabeledTree::new(vec![White, Black, White], vec![1, 1, 1], &[(0, 1), (1, 2)], None).unwrap();
        assert_eq!(ok.automorphism_count().unwrap(), 2);
        assert_eq!(ok.labeling_count().unwrap(), 3);
        assert!(LabeledTree::new(vec![White, White], vec![1, 1], &[(0, 1)], None).is_err());
        assert!(LabeledTree::new(vec![White, Black, White], vec![1, 1, 1], &[(0, 1), (0, 1)], None).is_err());
    }

    #[test]
    fn rerooting_recovers_rooted_tree() {
        let t: RootedTree = "b2(w1,w1(b3))".parse().unwrap();
        let l = LabeledTree::from_rooted(&t);
        assert_eq!(l.rooted_at(0), t);
        assert_eq!(l.len(), 4);
        assert_eq!(l.edges().len(), 3);
    }

    #[test]
    fn size_limit() {
        let mut t = RootedTree::leaf(Color::White, 1).unwrap();
        for k in 0..10 {
            let c = if k % 2 == 0 { Color::Black } else { Color::White };
            t = RootedTree::graft(vec![t], c, 1).unwrap();
        }
        assert!(matches!(t.automorphism_count(), Err(Error::TreeTooLarge { .. })));
    }
}
