//! Arbitrary finite `i`-branching trees (leaves at mixed depths).
//!
//! Only used to cross-check that deciding colorings over complete trees
//! loses nothing against the unrestricted tree quantifier.

use std::cmp::Ordering;

use crate::error::{EngineError, Result};

/// An `i`-branching tree up to reordering of siblings.
///
/// Children are kept in canonical (sorted) order so structurally isomorphic
/// trees compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GeneralTree {
    Leaf,
    Node(Vec<GeneralTree>),
}

impl GeneralTree {
    pub fn leaf_count(&self) -> usize {
        match self {
            GeneralTree::Leaf => 1,
            GeneralTree::Node(children) => children.iter().map(GeneralTree::leaf_count).sum(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            GeneralTree::Leaf => 0,
            GeneralTree::Node(children) => {
                1 + children.iter().map(GeneralTree::height).max().unwrap_or(0)
            }
        }
    }

    /// Depths of the leaves, left to right.
    pub fn leaf_depths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk_leaves(0, &mut out);
        out
    }

    fn walk_leaves(&self, depth: usize, out: &mut Vec<usize>) {
        match self {
            GeneralTree::Leaf => out.push(depth),
            GeneralTree::Node(children) => {
                for child in children {
                    child.walk_leaves(depth + 1, out);
                }
            }
        }
    }

    /// The tree as a set of integer sequences closed under initial segments,
    /// in depth-first order.
    pub fn nodes(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_nodes(&mut path, &mut out);
        out
    }

    fn walk_nodes(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        if let GeneralTree::Node(children) = self {
            for (digit, child) in children.iter().enumerate() {
                path.push(digit);
                child.walk_nodes(path, out);
                path.pop();
            }
        }
    }

    /// True when every internal node has exactly `branching` children.
    pub fn is_branching(&self, branching: usize) -> bool {
        match self {
            GeneralTree::Leaf => true,
            GeneralTree::Node(children) => {
                children.len() == branching && children.iter().all(|c| c.is_branching(branching))
            }
        }
    }

    /// Total order used for canonical sibling order: leaf count first, then
    /// structure.
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let by_size = self.leaf_count().cmp(&other.leaf_count());
        if by_size != Ordering::Equal {
            return by_size;
        }
        match (self, other) {
            (GeneralTree::Leaf, GeneralTree::Leaf) => Ordering::Equal,
            (GeneralTree::Leaf, GeneralTree::Node(_)) => Ordering::Less,
            (GeneralTree::Node(_), GeneralTree::Leaf) => Ordering::Greater,
            (GeneralTree::Node(a), GeneralTree::Node(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.canonical_cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                a.len().cmp(&b.len())
            }
        }
    }
}

/// Hard cap on the leaf bound accepted by [`enumerate_general_trees`].
pub const GENERAL_TREE_LEAF_CAP: usize = 10;

/// Every isomorphism class of `branching`-branching trees with at most
/// `max_leaves` leaves, smallest leaf count first.
pub fn enumerate_general_trees(branching: usize, max_leaves: usize) -> Result<Vec<GeneralTree>> {
    if branching < 2 {
        return Err(EngineError::InvalidShape(format!(
            "branching {branching} < 2"
        )));
    }
    if max_leaves > GENERAL_TREE_LEAF_CAP {
        return Err(EngineError::Unsupported(format!(
            "general tree enumeration is capped at {GENERAL_TREE_LEAF_CAP} leaves, got {max_leaves}"
        )));
    }
    // by_leaves[n] = canonical trees with exactly n leaves, sorted canonically
    let mut by_leaves: Vec<Vec<GeneralTree>> = vec![Vec::new(); max_leaves + 1];
    if max_leaves >= 1 {
        by_leaves[1].push(GeneralTree::Leaf);
    }
    for n in 2..=max_leaves {
        let mut found = Vec::new();
        let mut chosen: Vec<GeneralTree> = Vec::new();
        multisets(&by_leaves, branching, n, (1, 0), &mut chosen, &mut found);
        found.sort_by(GeneralTree::canonical_cmp);
        by_leaves[n] = found;
    }
    Ok(by_leaves.into_iter().flatten().collect())
}

/// Non-decreasing (in canonical order) sequences of `slots` trees whose leaf
/// counts sum to `remaining`. `floor` is the (leaf count, index) of the
/// smallest tree allowed next.
fn multisets(
    by_leaves: &[Vec<GeneralTree>],
    slots: usize,
    remaining: usize,
    floor: (usize, usize),
    chosen: &mut Vec<GeneralTree>,
    out: &mut Vec<GeneralTree>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(GeneralTree::Node(chosen.clone()));
        }
        return;
    }
    if remaining < slots {
        return;
    }
    let (min_leaves, min_index) = floor;
    for leaves in min_leaves..=remaining - (slots - 1) {
        let start = if leaves == min_leaves { min_index } else { 0 };
        for index in start..by_leaves[leaves].len() {
            chosen.push(by_leaves[leaves][index].clone());
            multisets(
                by_leaves,
                slots - 1,
                remaining - leaves,
                (leaves, index),
                chosen,
                out,
            );
            chosen.pop();
        }
    }
}

/// Sorts children recursively so isomorphic trees become equal.
pub fn canonicalize(tree: &GeneralTree) -> GeneralTree {
    match tree {
        GeneralTree::Leaf => GeneralTree::Leaf,
        GeneralTree::Node(children) => {
            let mut kids: Vec<GeneralTree> = children.iter().map(canonicalize).collect();
            kids.sort_by(GeneralTree::canonical_cmp);
            GeneralTree::Node(kids)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn binary_up_to_two_leaves() {
        let trees = enumerate_general_trees(2, 2).unwrap();
        assert_eq!(
            trees,
            vec![
                GeneralTree::Leaf,
                GeneralTree::Node(vec![GeneralTree::Leaf; 2])
            ]
        );
    }

    #[test]
    fn binary_up_to_four_leaves_has_unbalanced_tree() {
        let trees = enumerate_general_trees(2, 4).unwrap();
        assert!(trees.iter().any(|t| {
            let mut d = t.leaf_depths();
            d.sort();
            d == vec![1, 2, 2]
        }));
        // 1 + 1 + 1 + 2 trees with 1..=4 leaves (Wedderburn-Etherington)
        assert_eq!(trees.len(), 5);
    }

    #[test]
    fn ternary_two_leaves_is_single_leaf() {
        assert_eq!(
            enumerate_general_trees(3, 2).unwrap(),
            vec![GeneralTree::Leaf]
        );
    }

    #[test]
    fn enumeration_is_canonical_and_distinct() {
        for branching in 2..=3 {
            let trees = enumerate_general_trees(branching, 9).unwrap();
            let mut seen = HashSet::new();
            for t in &trees {
                assert!(t.is_branching(branching));
                assert!(t.leaf_count() <= 9);
                assert_eq!(&canonicalize(t), t);
                assert!(seen.insert(t.clone()));
            }
        }
        // unordered binary trees by leaves: 1,1,1,2,3,6,11 for n = 1..=7
        assert_eq!(enumerate_general_trees(2, 7).unwrap().len(), 25);
    }

    #[test]
    fn nodes_are_prefix_closed() {
        for t in enumerate_general_trees(2, 6).unwrap() {
            let nodes: HashSet<Vec<usize>> = t.nodes().into_iter().collect();
            for n in &nodes {
                if !n.is_empty() {
                    assert!(nodes.contains(&n[..n.len() - 1]));
                }
            }
        }
    }

    #[test]
    fn leaf_cap_enforced() {
        assert!(enumerate_general_trees(2, 11).is_err());
        assert!(enumerate_general_trees(1, 3).is_err());
    }
}
