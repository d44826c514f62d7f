//! Complete `i`-ary trees of fixed depth, their leaf indexing, and
//! `k`-branching subtrees.
//!
//! A complete tree `T(h, i)` is the set of all sequences of length at most
//! `h` over the digits `0..i`. Its leaves are the sequences of length exactly
//! `h`, indexed lexicographically with the root-level digit most significant.
//!
//! A `k`-branching subtree keeps the root and, at every retained internal
//! node, exactly `k` of its children, down to the leaves of the host tree.
//! It is encoded node-locally by the set of child digits chosen at each
//! retained internal node ([`SubtreeCert`]).

use std::collections::BTreeMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, Combinations};
use crate::error::{EngineError, Result};

/// Largest branching factor representable by a single digit.
pub const MAX_BRANCHING: usize = 255;
/// Upper bound on the number of leaves of a tree the engine will build.
pub const MAX_LEAVES: usize = 1 << 24;

/// Shape of the complete tree `T(depth, branching)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeShape {
    branching: usize,
    depth: usize,
}

impl TreeShape {
    pub fn new(branching: usize, depth: usize) -> Result<Self> {
        if branching < 2 {
            return Err(EngineError::InvalidShape(format!(
                "branching {branching} < 2"
            )));
        }
        if branching > MAX_BRANCHING {
            return Err(EngineError::InvalidShape(format!(
                "branching {branching} exceeds {MAX_BRANCHING}"
            )));
        }
        let mut leaves: usize = 1;
        for _ in 0..depth {
            leaves = leaves
                .checked_mul(branching)
                .filter(|&l| l <= MAX_LEAVES)
                .ok_or_else(|| {
                    EngineError::InvalidShape(format!(
                        "T({depth},{branching}) has more than {MAX_LEAVES} leaves"
                    ))
                })?;
        }
        Ok(TreeShape { branching, depth })
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn leaf_count(&self) -> usize {
        self.branching.pow(self.depth as u32)
    }

    /// Number of nodes at `level` (the root is level 0).
    pub fn level_width(&self, level: usize) -> usize {
        self.branching.pow(level as u32)
    }

    /// The same branching one level deeper.
    pub fn deeper(&self) -> Result<Self> {
        TreeShape::new(self.branching, self.depth + 1)
    }

    pub fn leaf_index(&self, path: &LeafPath) -> Result<usize> {
        leaf_index(self, path)
    }

    pub fn leaf_path(&self, index: usize) -> Result<LeafPath> {
        leaf_path(self, index)
    }
}

/// Root-to-leaf digit sequence of a complete tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeafPath(pub Vec<usize>);

impl LeafPath {
    pub fn digits(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for LeafPath {
    fn from(digits: Vec<usize>) -> Self {
        LeafPath(digits)
    }
}

/// Positional value of `path`, most significant digit first.
pub fn leaf_index(shape: &TreeShape, path: &LeafPath) -> Result<usize> {
    if path.0.len() != shape.depth {
        return Err(EngineError::PathLength {
            expected: shape.depth,
            got: path.0.len(),
        });
    }
    let mut index = 0;
    for &digit in &path.0 {
        if digit >= shape.branching {
            return Err(EngineError::DigitOutOfRange {
                digit,
                branching: shape.branching,
            });
        }
        index = index * shape.branching + digit;
    }
    Ok(index)
}

/// Inverse of [`leaf_index`].
pub fn leaf_path(shape: &TreeShape, index: usize) -> Result<LeafPath> {
    let leaves = shape.leaf_count();
    if index >= leaves {
        return Err(EngineError::LeafOutOfRange { index, leaves });
    }
    let mut digits = vec![0; shape.depth];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % shape.branching;
        rest /= shape.branching;
    }
    Ok(LeafPath(digits))
}

/// A `k`-branching subtree of a complete tree.
///
/// `choices` maps every retained internal node, written as its digit path
/// from the root, to the sorted `k`-subset of child digits kept below it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SubtreeCertRepr", try_from = "SubtreeCertRepr")]
pub struct SubtreeCert {
    shape: TreeShape,
    k: usize,
    choices: BTreeMap<Vec<u8>, Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
struct NodeChoice {
    node: Vec<u8>,
    children: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct SubtreeCertRepr {
    branching: usize,
    depth: usize,
    k: usize,
    choices: Vec<NodeChoice>,
}

impl From<SubtreeCert> for SubtreeCertRepr {
    fn from(cert: SubtreeCert) -> Self {
        SubtreeCertRepr {
            branching: cert.shape.branching,
            depth: cert.shape.depth,
            k: cert.k,
            choices: cert
                .choices
                .into_iter()
                .map(|(node, children)| NodeChoice { node, children })
                .collect(),
        }
    }
}

impl TryFrom<SubtreeCertRepr> for SubtreeCert {
    type Error = EngineError;

    fn try_from(repr: SubtreeCertRepr) -> Result<Self> {
        let shape = TreeShape::new(repr.branching, repr.depth)?;
        let choices = repr
            .choices
            .into_iter()
            .map(|c| (c.node, c.children))
            .collect();
        Ok(SubtreeCert {
            shape,
            k: repr.k,
            choices,
        })
    }
}

impl SubtreeCert {
    /// Builds a certificate without validating it; [`subtree_leaves`] checks
    /// well-formedness.
    pub fn from_choices(shape: TreeShape, k: usize, choices: BTreeMap<Vec<u8>, Vec<u8>>) -> Self {
        SubtreeCert { shape, k, choices }
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn choices(&self) -> &BTreeMap<Vec<u8>, Vec<u8>> {
        &self.choices
    }

    /// Children chosen below `node`, if `node` is a retained internal node.
    pub fn children_of(&self, node: &[u8]) -> Option<&[u8]> {
        self.choices.get(node).map(Vec::as_slice)
    }

    pub fn leaves(&self) -> Result<Vec<usize>> {
        subtree_leaves(self)
    }
}

/// Host-tree leaf indices of the maximal elements of `cert`, ascending.
pub fn subtree_leaves(cert: &SubtreeCert) -> Result<Vec<usize>> {
    let shape = cert.shape;
    if cert.k < 1 || cert.k > shape.branching {
        return Err(EngineError::MalformedCertificate(format!(
            "k = {} is not in 1..={}",
            cert.k, shape.branching
        )));
    }
    let mut leaves = Vec::with_capacity(cert.k.pow(shape.depth as u32));
    let mut visited = 0usize;
    let mut path = Vec::with_capacity(shape.depth);
    collect_leaves(cert, &mut path, 0, &mut leaves, &mut visited)?;
    if visited != cert.choices.len() {
        return Err(EngineError::MalformedCertificate(format!(
            "{} choice entries do not belong to the subtree",
            cert.choices.len() - visited
        )));
    }
    leaves.sort_unstable();
    Ok(leaves)
}

fn collect_leaves(
    cert: &SubtreeCert,
    path: &mut Vec<u8>,
    index: usize,
    leaves: &mut Vec<usize>,
    visited: &mut usize,
) -> Result<()> {
    let shape = cert.shape;
    if path.len() == shape.depth {
        leaves.push(index);
        return Ok(());
    }
    let children = cert.choices.get(path.as_slice()).ok_or_else(|| {
        EngineError::MalformedCertificate(format!("no choice at retained node {path:?}"))
    })?;
    *visited += 1;
    if children.len() != cert.k {
        return Err(EngineError::MalformedCertificate(format!(
            "node {path:?} keeps {} children, expected {}",
            children.len(),
            cert.k
        )));
    }
    if children.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EngineError::MalformedCertificate(format!(
            "children of node {path:?} are not strictly increasing"
        )));
    }
    for &child in children {
        if child as usize >= shape.branching {
            return Err(EngineError::MalformedCertificate(format!(
                "child digit {child} at node {path:?} exceeds branching {}",
                shape.branching
            )));
        }
        path.push(child);
        collect_leaves(
            cert,
            path,
            index * shape.branching + child as usize,
            leaves,
            visited,
        )?;
        path.pop();
    }
    Ok(())
}

/// Number of `k`-branching subtrees of `T(depth, branching)`:
/// `f(0) = 1`, `f(d) = C(i, k) * f(d - 1)^k`. Saturates at `u128::MAX`.
pub fn subtree_count(branching: usize, k: usize, depth: usize) -> u128 {
    let per_node = binomial(branching, k);
    let mut f: u128 = 1;
    for _ in 0..depth {
        let mut power: u128 = 1;
        for _ in 0..k {
            power = power.saturating_mul(f);
        }
        f = per_node.saturating_mul(power);
    }
    f
}

type Relative = Rc<Vec<(Vec<u8>, Vec<u8>)>>;

/// Every `k`-branching subtree of `shape`, each exactly once.
///
/// Order: by the root's child subset (lexicographic), then by the subtrees
/// below the chosen children, the last chosen child varying fastest.
pub fn enumerate_subtrees(shape: TreeShape, k: usize) -> Result<SubtreeIter> {
    if k > shape.branching {
        return Err(EngineError::EmptyDomain {
            k,
            branching: shape.branching,
        });
    }
    if k < 1 {
        return Err(EngineError::InvalidQuery(format!(
            "subtree branching {k} < 1"
        )));
    }
    let below = if shape.depth == 0 {
        Vec::new()
    } else {
        relative_subtrees(shape.branching, k, shape.depth - 1)
    };
    let mut subsets = Combinations::new(shape.branching, k);
    let subset = subsets.next();
    Ok(SubtreeIter {
        shape,
        k,
        below,
        subsets,
        subset,
        counter: vec![0; k],
        root_only: shape.depth == 0,
        done: false,
    })
}

/// All subtrees of a depth-`depth` tree, as node-relative choice lists.
fn relative_subtrees(branching: usize, k: usize, depth: usize) -> Vec<Relative> {
    if depth == 0 {
        return vec![Rc::new(Vec::new())];
    }
    let below = relative_subtrees(branching, k, depth - 1);
    let mut out = Vec::new();
    for subset in Combinations::new(branching, k) {
        let mut counter = vec![0usize; k];
        loop {
            out.push(Rc::new(compose(&subset, &counter, &below)));
            if !advance(&mut counter, below.len()) {
                break;
            }
        }
    }
    out
}

fn compose(subset: &[usize], counter: &[usize], below: &[Relative]) -> Vec<(Vec<u8>, Vec<u8>)> {
    let mut entries = vec![(
        Vec::new(),
        subset.iter().map(|&d| d as u8).collect::<Vec<u8>>(),
    )];
    for (&digit, &which) in subset.iter().zip(counter) {
        for (node, children) in below[which].iter() {
            let mut path = Vec::with_capacity(node.len() + 1);
            path.push(digit as u8);
            path.extend_from_slice(node);
            entries.push((path, children.clone()));
        }
    }
    entries
}

/// Mixed-radix increment, last position fastest. Returns false on wrap.
fn advance(counter: &mut [usize], radix: usize) -> bool {
    for slot in counter.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Stream returned by [`enumerate_subtrees`].
#[derive(Debug)]
pub struct SubtreeIter {
    shape: TreeShape,
    k: usize,
    below: Vec<Relative>,
    subsets: Combinations,
    subset: Option<Vec<usize>>,
    counter: Vec<usize>,
    root_only: bool,
    done: bool,
}

impl Iterator for SubtreeIter {
    type Item = SubtreeCert;

    fn next(&mut self) -> Option<SubtreeCert> {
        if self.done {
            return None;
        }
        if self.root_only {
            self.done = true;
            return Some(SubtreeCert {
                shape: self.shape,
                k: self.k,
                choices: BTreeMap::new(),
            });
        }
        let subset = self.subset.as_ref()?;
        let choices = compose(subset, &self.counter, &self.below)
            .into_iter()
            .collect();
        if !advance(&mut self.counter, self.below.len()) {
            self.subset = self.subsets.next();
            if self.subset.is_none() {
                self.done = true;
            }
        }
        Some(SubtreeCert {
            shape: self.shape,
            k: self.k,
            choices,
        })
    }
}
