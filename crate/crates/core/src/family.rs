//! Bottom-up dynamic program over color sets.
//!
//! For a node `v`, the family of `v` is the antichain of inclusion-minimal
//! color sets `S` such that some `k`-branching subtree rooted at `v` (reaching
//! down to host leaves) uses exactly the colors of `S`, truncated to sets of
//! size at most `cap`. Unions only grow going up, so anything above `cap` can
//! never come back under it.

use std::collections::BTreeMap;

use crate::coloring::Coloring;
use crate::combinatorics::Combinations;
use crate::error::{EngineError, Result};
use crate::general::GeneralTree;
use crate::tree::SubtreeCert;

/// Inclusion-minimal achievable color sets at one node, as bitmasks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSetFamily {
    sets: Vec<u64>,
}

impl ColorSetFamily {
    pub fn empty() -> Self {
        ColorSetFamily { sets: Vec::new() }
    }

    pub fn singleton(color: usize) -> Self {
        ColorSetFamily {
            sets: vec![1u64 << color],
        }
    }

    /// Builds the antichain of minimal members of `sets` with size `<= cap`.
    pub fn from_sets(sets: impl IntoIterator<Item = u64>, cap: usize) -> Self {
        let mut sets: Vec<u64> = sets
            .into_iter()
            .filter(|s| s.count_ones() as usize <= cap)
            .collect();
        minimize(&mut sets);
        ColorSetFamily { sets }
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Members sorted by size, then by bit pattern.
    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    /// Smallest member, if any.
    pub fn min_set(&self) -> Option<u64> {
        self.sets.first().copied()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.min_set().map(|s| s.count_ones() as usize)
    }

    /// Whether some member is contained in `palette`.
    pub fn fits_within(&self, palette: u64) -> bool {
        self.sets.iter().any(|&s| s & !palette == 0)
    }
}

fn minimize(sets: &mut Vec<u64>) {
    if sets.len() <= 1 {
        return;
    }
    sets.sort_unstable_by_key(|&s| (s.count_ones(), s));
    sets.dedup();
    let mut kept = 0;
    for idx in 0..sets.len() {
        let s = sets[idx];
        if !sets[..kept].iter().any(|&t| t & !s == 0) {
            sets[kept] = s;
            kept += 1;
        }
    }
    sets.truncate(kept);
}

/// Family of a node whose children have the given families.
pub fn combine(children: &[&ColorSetFamily], k: usize, cap: usize) -> ColorSetFamily {
    let live: Vec<&ColorSetFamily> = children.iter().copied().filter(|f| !f.is_empty()).collect();
    if live.len() < k {
        return ColorSetFamily::empty();
    }
    let subsets: Vec<Vec<usize>> = Combinations::new(live.len(), k).collect();
    let mut scratch = Scratch::default();
    combine_subsets(|c| live[c], &subsets, cap, &mut scratch)
}

/// Reusable buffers for [`combine_subsets`].
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    acc: Vec<u64>,
    next: Vec<u64>,
    out: Vec<u64>,
}

/// Core of [`combine`] over precomputed child subsets. Subsets touching a
/// child with an empty family contribute nothing.
pub(crate) fn combine_subsets<'f>(
    child: impl Fn(usize) -> &'f ColorSetFamily,
    subsets: &[Vec<usize>],
    cap: usize,
    scratch: &mut Scratch,
) -> ColorSetFamily {
    scratch.out.clear();
    'subset: for subset in subsets {
        if subset.iter().any(|&c| child(c).is_empty()) {
            continue;
        }
        scratch.acc.clear();
        scratch.acc.push(0);
        for &c in subset {
            scratch.next.clear();
            for &a in &scratch.acc {
                for &b in child(c).sets() {
                    let u = a | b;
                    if u.count_ones() as usize <= cap {
                        scratch.next.push(u);
                    }
                }
            }
            minimize(&mut scratch.next);
            if scratch.next.is_empty() {
                continue 'subset;
            }
            std::mem::swap(&mut scratch.acc, &mut scratch.next);
        }
        scratch.out.extend_from_slice(&scratch.acc);
    }
    minimize(&mut scratch.out);
    ColorSetFamily {
        sets: scratch.out.clone(),
    }
}

/// Result of [`min_colors`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinColors {
    /// Fewest distinct colors on any `k`-branching subtree.
    Value(usize),
    /// Every `k`-branching subtree uses more than `cap` colors.
    ExceedsCap,
}

impl MinColors {
    pub fn value(self) -> Option<usize> {
        match self {
            MinColors::Value(v) => Some(v),
            MinColors::ExceedsCap => None,
        }
    }
}

fn check_k(coloring: &Coloring, k: usize) -> Result<()> {
    let branching = coloring.shape().branching();
    if k > branching {
        return Err(EngineError::EmptyDomain { k, branching });
    }
    if k < 1 {
        return Err(EngineError::InvalidQuery(format!(
            "subtree branching {k} < 1"
        )));
    }
    Ok(())
}

/// Families of every node, level by level from the root (level 0) to the
/// leaves (level `depth`).
pub fn level_families(
    coloring: &Coloring,
    k: usize,
    cap: usize,
) -> Result<Vec<Vec<ColorSetFamily>>> {
    check_k(coloring, k)?;
    let shape = coloring.shape();
    let i = shape.branching();
    let depth = shape.depth();
    let mut levels: Vec<Vec<ColorSetFamily>> = Vec::with_capacity(depth + 1);
    let leaves: Vec<ColorSetFamily> = coloring
        .leaf_colors()
        .iter()
        .map(|&c| {
            if cap >= 1 {
                ColorSetFamily::singleton(c as usize)
            } else {
                ColorSetFamily::empty()
            }
        })
        .collect();
    levels.push(leaves);
    for _ in 0..depth {
        let below = levels.last().expect("leaf level present");
        let level: Vec<ColorSetFamily> = below
            .chunks(i)
            .map(|kids| {
                let refs: Vec<&ColorSetFamily> = kids.iter().collect();
                combine(&refs, k, cap)
            })
            .collect();
        levels.push(level);
    }
    levels.reverse();
    Ok(levels)
}

/// Minimum number of distinct colors over all `k`-branching subtrees, or
/// [`MinColors::ExceedsCap`] when that minimum is above `cap`.
pub fn min_colors(coloring: &Coloring, k: usize, cap: usize) -> Result<MinColors> {
    let levels = level_families(coloring, k, cap)?;
    Ok(match levels[0][0].min_size() {
        Some(v) => MinColors::Value(v),
        None => MinColors::ExceedsCap,
    })
}

/// True iff every `k`-branching subtree carries at least `m + 1` colors.
pub fn defeats(coloring: &Coloring, k: usize, m: usize) -> Result<bool> {
    Ok(min_colors(coloring, k, m)? == MinColors::ExceedsCap)
}

/// A subtree achieving the minimum color count, when it is at most `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeWitness {
    pub colors_used: u64,
    pub cert: SubtreeCert,
}

impl SubtreeWitness {
    pub fn color_count(&self) -> usize {
        self.colors_used.count_ones() as usize
    }

    pub fn color_list(&self) -> Vec<usize> {
        (0..64).filter(|c| self.colors_used >> c & 1 == 1).collect()
    }
}

/// Like [`min_colors`] but also returns a subtree using the minimal palette.
pub fn min_colors_witness(
    coloring: &Coloring,
    k: usize,
    cap: usize,
) -> Result<Option<SubtreeWitness>> {
    let levels = level_families(coloring, k, cap)?;
    let Some(palette) = levels[0][0].min_set() else {
        return Ok(None);
    };
    let cert = subtree_within_palette(coloring, k, palette)?
        .expect("palette taken from the root family is realizable");
    Ok(Some(SubtreeWitness {
        colors_used: palette,
        cert,
    }))
}

/// Leftmost `k`-branching subtree whose leaf colors all lie in `palette`.
pub fn subtree_within_palette(
    coloring: &Coloring,
    k: usize,
    palette: u64,
) -> Result<Option<SubtreeCert>> {
    check_k(coloring, k)?;
    let shape = *coloring.shape();
    let i = shape.branching();
    let depth = shape.depth();
    // feasible[level][node]
    let mut feasible: Vec<Vec<bool>> = vec![coloring
        .leaf_colors()
        .iter()
        .map(|&c| palette >> c & 1 == 1)
        .collect()];
    for _ in 0..depth {
        let below = feasible.last().expect("leaf level present");
        let level = below
            .chunks(i)
            .map(|kids| kids.iter().filter(|&&f| f).count() >= k)
            .collect();
        feasible.push(level);
    }
    feasible.reverse();
    if !feasible[0][0] {
        return Ok(None);
    }
    let mut choices = BTreeMap::new();
    let mut path = Vec::with_capacity(depth);
    pick_feasible(&feasible, i, k, 0, 0, &mut path, &mut choices);
    Ok(Some(SubtreeCert::from_choices(shape, k, choices)))
}

fn pick_feasible(
    feasible: &[Vec<bool>],
    i: usize,
    k: usize,
    level: usize,
    node: usize,
    path: &mut Vec<u8>,
    choices: &mut BTreeMap<Vec<u8>, Vec<u8>>,
) {
    if level + 1 == feasible.len() {
        return;
    }
    let chosen: Vec<u8> = (0..i)
        .filter(|&d| feasible[level + 1][node * i + d])
        .take(k)
        .map(|d| d as u8)
        .collect();
    choices.insert(path.clone(), chosen.clone());
    for d in chosen {
        path.push(d);
        pick_feasible(
            feasible,
            i,
            k,
            level + 1,
            node * i + d as usize,
            path,
            choices,
        );
        path.pop();
    }
}

/// Root family of an arbitrary tree whose leaves (left to right) carry
/// `leaf_colors`.
pub fn general_family(
    tree: &GeneralTree,
    leaf_colors: &[u8],
    k: usize,
    cap: usize,
) -> ColorSetFamily {
    let mut next_leaf = 0;
    general_family_at(tree, leaf_colors, &mut next_leaf, k, cap)
}

fn general_family_at(
    tree: &GeneralTree,
    leaf_colors: &[u8],
    next_leaf: &mut usize,
    k: usize,
    cap: usize,
) -> ColorSetFamily {
    match tree {
        GeneralTree::Leaf => {
            let c = leaf_colors[*next_leaf];
            *next_leaf += 1;
            if cap >= 1 {
                ColorSetFamily::singleton(c as usize)
            } else {
                ColorSetFamily::empty()
            }
        }
        GeneralTree::Node(children) => {
            let fams: Vec<ColorSetFamily> = children
                .iter()
                .map(|c| general_family_at(c, leaf_colors, next_leaf, k, cap))
                .collect();
            let refs: Vec<&ColorSetFamily> = fams.iter().collect();
            combine(&refs, k, cap)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::digit_sum_coloring;
    use crate::tree::{subtree_leaves, TreeShape};

    fn shape(i: usize, h: usize) -> TreeShape {
        TreeShape::new(i, h).unwrap()
    }

    #[test]
    fn minimize_keeps_antichain() {
        let f = ColorSetFamily::from_sets([0b011, 0b001, 0b110, 0b100, 0b111], 3);
        assert_eq!(f.sets(), &[0b001, 0b100]);
        let g = ColorSetFamily::from_sets([0b0111, 0b1000], 2);
        assert_eq!(g.sets(), &[0b1000]);
    }

    #[test]
    fn constant_coloring_needs_one_color() {
        for k in 2..=3 {
            let c = Coloring::constant(shape(3, 3), 4, 2).unwrap();
            assert_eq!(min_colors(&c, k, 1).unwrap(), MinColors::Value(1));
            assert!(!defeats(&c, k, 1).unwrap());
        }
    }

    #[test]
    fn rainbow_star() {
        let c = Coloring::new(shape(3, 1), 3, vec![0, 1, 2]).unwrap();
        assert_eq!(min_colors(&c, 2, 3).unwrap(), MinColors::Value(2));
        assert_eq!(min_colors(&c, 2, 1).unwrap(), MinColors::ExceedsCap);
        assert!(defeats(&c, 2, 1).unwrap());
    }

    #[test]
    fn k_above_branching_is_empty_domain() {
        let c = Coloring::constant(shape(2, 2), 2, 0).unwrap();
        assert_eq!(
            min_colors(&c, 3, 2),
            Err(EngineError::EmptyDomain { k: 3, branching: 2 })
        );
    }

    #[test]
    fn witness_is_valid_and_minimal() {
        let c = digit_sum_coloring(shape(3, 3), 5).unwrap();
        let w = min_colors_witness(&c, 2, 5).unwrap().unwrap();
        let leaves = subtree_leaves(&w.cert).unwrap();
        assert_eq!(leaves.len(), 8);
        let used = leaves.iter().fold(0u64, |acc, &l| acc | 1 << c.color_of(l));
        assert_eq!(used, w.colors_used);
        assert_eq!(Some(w.color_count()), min_colors(&c, 2, 5).unwrap().value());
    }

    #[test]
    fn general_family_matches_complete_tree() {
        // T(2,2) written as a general tree
        let t = GeneralTree::Node(vec![
            GeneralTree::Node(vec![GeneralTree::Leaf, GeneralTree::Leaf]),
            GeneralTree::Node(vec![GeneralTree::Leaf, GeneralTree::Leaf]),
        ]);
        let c = Coloring::new(shape(2, 2), 3, vec![0, 1, 1, 2]).unwrap();
        let levels = level_families(&c, 2, 3).unwrap();
        assert_eq!(general_family(&t, c.leaf_colors(), 2, 3), levels[0][0]);
    }
}
