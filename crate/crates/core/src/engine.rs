//! Deciding the subtree coloring property `P(i, j, k, m)`: every `j`-coloring
//! of the leaves of a finite `i`-branching tree admits a `k`-branching subtree
//! (with leaves among the host leaves) whose leaves use at most `m` colors.
//!
//! Failure is witnessed by a concrete coloring of a complete tree `T(h, i)`
//! that every `k`-branching subtree sees with at least `m + 1` colors. Such a
//! witness stays a witness one level deeper (see [`lift`]), and witnesses on
//! arbitrary trees pad to complete trees (see [`pad_to_complete`]), so the
//! engine only ever searches complete trees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, MAX_COLORS};
use crate::error::{EngineError, Result};
use crate::family::{defeats, general_family};
use crate::general::{enumerate_general_trees, GeneralTree};
use crate::search::{search_counterexample_with, SearchOptions, SearchOutcome};
use crate::tree::{SubtreeCert, TreeShape};

/// The quadruple `(i, j, k, m)`: tree branching, colors, subtree branching,
/// allowed colors on the subtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropertyQuery {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub m: usize,
}

impl PropertyQuery {
    pub fn new(i: usize, j: usize, k: usize, m: usize) -> Result<Self> {
        let q = PropertyQuery { i, j, k, m };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.i < 2 {
            return Err(EngineError::InvalidQuery(format!(
                "tree branching i = {} < 2",
                self.i
            )));
        }
        if self.j < 1 || self.j > MAX_COLORS {
            return Err(EngineError::InvalidQuery(format!(
                "color count j = {} not in 1..={MAX_COLORS}",
                self.j
            )));
        }
        if self.k < 2 {
            return Err(EngineError::InvalidQuery(format!(
                "subtree branching k = {} < 2",
                self.k
            )));
        }
        if self.m < 1 {
            return Err(EngineError::InvalidQuery(
                "allowed colors m must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// `P(i, j, k, 1)` fails exactly when `i <= j (k - 1)`.
    pub fn pigeonhole_fails(&self) -> bool {
        self.i <= self.j * (self.k - 1)
    }
}

impl fmt::Display for PropertyQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{},{})", self.i, self.j, self.k, self.m)
    }
}

/// Why a failing verdict is justified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureBasis {
    /// `k > i`: no `k`-branching subtree ends on host leaves.
    VacuousBranching,
    /// `m = 1` and `i <= j (k - 1)`: each color used at most `k - 1` times.
    Arithmetic,
    /// A stored coloring re-verified against this query.
    Certificate,
    /// Found by exhaustive search at the reported depth.
    Search,
}

/// Why a holding verdict is justified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HoldsReason {
    /// `j <= m`: every subtree trivially uses at most `m` colors.
    TrivialColors,
    /// `m = 1` and `i >= j (k - 1) + 1`: a monochromatic subtree always exists.
    PigeonholeArithmetic,
    Axiom {
        citation: String,
    },
    /// No counterexample among all trees with at most `max_leaves` leaves.
    /// Only meaningful for the bounded general-tree check.
    BoundedGeneralSearch {
        max_leaves: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Fails {
        depth: usize,
        witness: Coloring,
        basis: FailureBasis,
    },
    Holds {
        reason: HoldsReason,
    },
    Unknown {
        max_depth_searched: usize,
        nodes_explored: u64,
    },
}

impl Verdict {
    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Fails { .. } => "fails",
            Verdict::Holds { .. } => "holds",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    /// Re-checks a failing verdict's witness against `query`. Holding and
    /// unknown verdicts carry nothing to re-check and return true.
    pub fn reverify(&self, query: &PropertyQuery) -> Result<bool> {
        match self {
            Verdict::Fails {
                basis: FailureBasis::VacuousBranching,
                ..
            } => Ok(query.k > query.i),
            Verdict::Fails { depth, witness, .. } => Ok(witness.shape().depth() == *depth
                && witness.shape().branching() == query.i
                && witness.used_colors() <= query.j
                && defeats(witness, query.k, query.m)?),
            _ => Ok(true),
        }
    }
}

/// One bounded search, recorded so later runs can skip repeated work.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub query: PropertyQuery,
    pub depth: usize,
    pub outcome: SearchStatus,
    pub nodes: u64,
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    NoneFound,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub max_depth: usize,
    /// Total node budget shared across all depths.
    pub budget: u64,
    pub parallelism: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            budget: DEFAULT_NODE_BUDGET,
            parallelism: 1,
        }
    }
}

pub const DEFAULT_MAX_DEPTH: usize = 3;
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Full result of [`decide_with`]: the verdict and the searches run for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub query: PropertyQuery,
    pub verdict: Verdict,
    pub searches: Vec<SearchRecord>,
    pub trace: Vec<String>,
}

/// Decides `query` with no stored certificates or prior searches.
pub fn decide(query: &PropertyQuery, max_depth: usize, budget: u64) -> Result<Verdict> {
    let options = DecideOptions {
        max_depth,
        budget,
        parallelism: 1,
    };
    Ok(decide_with(query, &options, &[], &[])?.verdict)
}

/// The decision pipeline: trivial color bound, vacuous branching, the
/// pigeonhole criterion for `m = 1`, stored certificates, then iterative
/// deepening search.
///
/// `certificates` are candidate defeating colorings (each is re-verified
/// before use). `prior` lists earlier searches; depths already exhausted for
/// this exact query are skipped.
pub fn decide_with(
    query: &PropertyQuery,
    options: &DecideOptions,
    certificates: &[Coloring],
    prior: &[SearchRecord],
) -> Result<Decision> {
    query.validate()?;
    let mut trace = Vec::new();
    let done = |verdict: Verdict, trace: Vec<String>, searches: Vec<SearchRecord>| {
        Ok(Decision {
            query: *query,
            verdict,
            searches,
            trace,
        })
    };

    if query.j <= query.m && query.k <= query.i {
        trace.push(format!(
            "j = {} <= m = {}: any subtree uses at most m colors",
            query.j, query.m
        ));
        return done(
            Verdict::Holds {
                reason: HoldsReason::TrivialColors,
            },
            trace,
            vec![],
        );
    }
    if query.k > query.i {
        trace.push(format!(
            "k = {} > i = {}: no k-branching subtree ends on host leaves; failure is vacuous",
            query.k, query.i
        ));
        let witness = Coloring::constant(TreeShape::new(query.i, 1)?, query.j, 0)?;
        return done(
            Verdict::Fails {
                depth: 1,
                witness,
                basis: FailureBasis::VacuousBranching,
            },
            trace,
            vec![],
        );
    }
    if query.m == 1 {
        if query.pigeonhole_fails() {
            trace.push(format!(
                "i = {} <= j(k-1) = {}: color each of {} colors on at most k-1 = {} leaves",
                query.i,
                query.j * (query.k - 1),
                query.j,
                query.k - 1
            ));
            let witness = pigeonhole_witness(query)?;
            return done(
                Verdict::Fails {
                    depth: 1,
                    witness,
                    basis: FailureBasis::Arithmetic,
                },
                trace,
                vec![],
            );
        }
        trace.push(format!(
            "i = {} >= j(k-1)+1 = {}: a monochromatic k-branching subtree always exists",
            query.i,
            query.j * (query.k - 1) + 1
        ));
        return done(
            Verdict::Holds {
                reason: HoldsReason::PigeonholeArithmetic,
            },
            trace,
            vec![],
        );
    }

    for cert in certificates {
        if let Some(witness) = adapt_certificate(cert, query)? {
            trace.push(format!(
                "stored coloring of T({},{}) re-verified",
                witness.shape().depth(),
                query.i
            ));
            let depth = witness.shape().depth();
            return done(
                Verdict::Fails {
                    depth,
                    witness,
                    basis: FailureBasis::Certificate,
                },
                trace,
                vec![],
            );
        }
    }

    let mut remaining = options.budget;
    let mut searches = Vec::new();
    let mut nodes_explored = 0;
    let mut max_depth_searched = 0;
    for depth in 1..=options.max_depth {
        let known_empty = prior
            .iter()
            .any(|r| r.query == *query && r.depth == depth && r.outcome == SearchStatus::NoneFound);
        if known_empty {
            trace.push(format!(
                "depth {depth}: exhausted in an earlier run, skipped"
            ));
            max_depth_searched = depth;
            continue;
        }
        if remaining == 0 {
            break;
        }
        let outcome = search_counterexample_with(
            query,
            depth,
            SearchOptions {
                budget: remaining,
                parallelism: options.parallelism,
            },
        )?;
        let nodes = outcome.nodes();
        nodes_explored += nodes;
        remaining = remaining.saturating_sub(nodes);
        let status = match &outcome {
            SearchOutcome::Found { .. } => SearchStatus::Found,
            SearchOutcome::NoneFound { .. } => SearchStatus::NoneFound,
            SearchOutcome::BudgetExhausted { .. } => SearchStatus::BudgetExhausted,
        };
        searches.push(SearchRecord {
            query: *query,
            depth,
            outcome: status,
            nodes,
            budget: options.budget,
        });
        match outcome {
            SearchOutcome::Found { coloring, .. } => {
                trace.push(format!(
                    "depth {depth}: defeating coloring found after {nodes} nodes"
                ));
                return done(
                    Verdict::Fails {
                        depth,
                        witness: coloring,
                        basis: FailureBasis::Search,
                    },
                    trace,
                    searches,
                );
            }
            SearchOutcome::NoneFound { .. } => {
                trace.push(format!(
                    "depth {depth}: no defeating coloring ({nodes} nodes)"
                ));
                max_depth_searched = depth;
            }
            SearchOutcome::BudgetExhausted { .. } => {
                trace.push(format!(
                    "depth {depth}: budget exhausted after {nodes} nodes"
                ));
                break;
            }
        }
    }
    done(
        Verdict::Unknown {
            max_depth_searched,
            nodes_explored,
        },
        trace,
        searches,
    )
}

/// Depth-1 coloring using each color on at most `k - 1` leaves.
fn pigeonhole_witness(query: &PropertyQuery) -> Result<Coloring> {
    let shape = TreeShape::new(query.i, 1)?;
    Coloring::new(
        shape,
        query.j,
        (0..query.i).map(|t| t / (query.k - 1)).collect(),
    )
}

/// Re-targets a stored coloring to `query` when it is a valid witness for it.
fn adapt_certificate(cert: &Coloring, query: &PropertyQuery) -> Result<Option<Coloring>> {
    if cert.shape().branching() != query.i || cert.used_colors() > query.j {
        return Ok(None);
    }
    let canonical = cert.canonical();
    let leaves = canonical
        .leaf_colors()
        .iter()
        .map(|&c| c as usize)
        .collect();
    let witness = Coloring::new(*cert.shape(), query.j, leaves)?;
    Ok(defeats(&witness, query.k, query.m)?.then_some(witness))
}

/// The same coloring one level deeper: each new leaf takes its parent's color.
pub fn lift(coloring: &Coloring) -> Result<Coloring> {
    let shape = coloring.shape();
    let deeper = shape.deeper()?;
    let i = shape.branching();
    let leaves = (0..deeper.leaf_count())
        .map(|leaf| coloring.color_of(leaf / i))
        .collect();
    Coloring::new(deeper, coloring.colors(), leaves)
}

/// A monochromatic `k`-branching subtree, built bottom-up: each child
/// contributes the color of its own monochromatic subtree, and pigeonhole
/// finds `k` children sharing one (smallest such color, leftmost children).
///
/// Requires `i >= j (k - 1) + 1` where `j` is the coloring's color count.
pub fn find_monochromatic_subtree(coloring: &Coloring, k: usize) -> Result<(usize, SubtreeCert)> {
    let shape = *coloring.shape();
    let i = shape.branching();
    let j = coloring.colors();
    if k < 1 || k > i {
        return Err(EngineError::EmptyDomain { k, branching: i });
    }
    if i < j * (k - 1) + 1 {
        return Err(EngineError::Unsupported(format!(
            "pigeonhole needs i >= j(k-1)+1, got i = {i}, j = {j}, k = {k}"
        )));
    }
    let depth = shape.depth();
    // color[level][node] of the chosen monochromatic subtree below the node
    let mut color: Vec<Vec<usize>> =
        vec![coloring.leaf_colors().iter().map(|&c| c as usize).collect()];
    let mut picked: Vec<Vec<Vec<u8>>> = Vec::with_capacity(depth);
    for _ in 0..depth {
        let below = color.last().expect("leaf level present");
        let mut level_colors = Vec::with_capacity(below.len() / i);
        let mut level_picks = Vec::with_capacity(below.len() / i);
        for kids in below.chunks(i) {
            let mut counts = vec![0usize; j];
            for &c in kids {
                counts[c] += 1;
            }
            let c = counts
                .iter()
                .position(|&n| n >= k)
                .expect("pigeonhole guarantees some color on k children");
            let digits: Vec<u8> = kids
                .iter()
                .enumerate()
                .filter(|(_, &kc)| kc == c)
                .take(k)
                .map(|(d, _)| d as u8)
                .collect();
            level_colors.push(c);
            level_picks.push(digits);
        }
        color.push(level_colors);
        picked.push(level_picks);
    }
    color.reverse();
    picked.reverse();
    let mut choices = BTreeMap::new();
    let mut path = Vec::with_capacity(depth);
    collect_picks(&picked, i, 0, 0, &mut path, &mut choices);
    Ok((color[0][0], SubtreeCert::from_choices(shape, k, choices)))
}

fn collect_picks(
    picked: &[Vec<Vec<u8>>],
    i: usize,
    level: usize,
    node: usize,
    path: &mut Vec<u8>,
    choices: &mut BTreeMap<Vec<u8>, Vec<u8>>,
) {
    if level == picked.len() {
        return;
    }
    let digits = picked[level][node].clone();
    choices.insert(path.clone(), digits.clone());
    for d in digits {
        path.push(d);
        collect_picks(picked, i, level + 1, node * i + d as usize, path, choices);
        path.pop();
    }
}

/// Pads a coloring of an arbitrary tree to the complete tree of the same
/// height: every leaf at depth `d` is replaced by a full subtree of height
/// `height - d` carrying its color.
pub fn pad_to_complete(
    tree: &GeneralTree,
    branching: usize,
    colors: usize,
    leaf_colors: &[u8],
) -> Result<Coloring> {
    if !tree.is_branching(branching) {
        return Err(EngineError::InvalidShape(format!(
            "tree is not {branching}-branching"
        )));
    }
    let height = tree.height();
    let shape = TreeShape::new(branching, height)?;
    let mut leaves = Vec::with_capacity(shape.leaf_count());
    let mut next = 0;
    pad_walk(tree, branching, height, leaf_colors, &mut next, &mut leaves);
    Coloring::new(shape, colors, leaves)
}

fn pad_walk(
    tree: &GeneralTree,
    branching: usize,
    remaining: usize,
    leaf_colors: &[u8],
    next: &mut usize,
    out: &mut Vec<usize>,
) {
    match tree {
        GeneralTree::Leaf => {
            let c = leaf_colors[*next] as usize;
            *next += 1;
            out.extend(std::iter::repeat_n(c, branching.pow(remaining as u32)));
        }
        GeneralTree::Node(children) => {
            for child in children {
                pad_walk(child, branching, remaining - 1, leaf_colors, next, out);
            }
        }
    }
}

/// Colorings examined by [`decide_general`] before it gives up.
pub const GENERAL_COLORING_BUDGET: u64 = 50_000_000;

/// Brute force over every `i`-branching tree with at most `max_leaves` leaves
/// and every coloring of it (up to renaming). A counterexample is returned
/// padded to a complete tree.
pub fn decide_general(query: &PropertyQuery, max_leaves: usize) -> Result<Verdict> {
    query.validate()?;
    if query.j <= query.m && query.k <= query.i {
        return Ok(Verdict::Holds {
            reason: HoldsReason::TrivialColors,
        });
    }
    if query.k > query.i {
        let witness = Coloring::constant(TreeShape::new(query.i, 1)?, query.j, 0)?;
        return Ok(Verdict::Fails {
            depth: 1,
            witness,
            basis: FailureBasis::VacuousBranching,
        });
    }
    let mut examined: u64 = 0;
    for tree in enumerate_general_trees(query.i, max_leaves)? {
        let n = tree.leaf_count();
        let mut colors = vec![0u8; n];
        loop {
            examined += 1;
            if examined > GENERAL_COLORING_BUDGET {
                return Err(EngineError::BudgetExceeded(GENERAL_COLORING_BUDGET));
            }
            if general_family(&tree, &colors, query.k, query.m).is_empty() {
                let witness = pad_to_complete(&tree, query.i, query.j, &colors)?;
                let depth = witness.shape().depth();
                return Ok(Verdict::Fails {
                    depth,
                    witness,
                    basis: FailureBasis::Search,
                });
            }
            if !next_canonical(&mut colors, query.j) {
                break;
            }
        }
    }
    Ok(Verdict::Holds {
        reason: HoldsReason::BoundedGeneralSearch { max_leaves },
    })
}

/// Advances to the next restricted-growth string over `colors` symbols.
fn next_canonical(colors: &mut [u8], limit: usize) -> bool {
    let n = colors.len();
    for pos in (1..n).rev() {
        let prefix_max = colors[..pos].iter().copied().max().unwrap_or(0);
        if (colors[pos] as usize) < limit - 1 && colors[pos] <= prefix_max {
            colors[pos] += 1;
            for c in &mut colors[pos + 1..] {
                *c = 0;
            }
            return true;
        }
    }
    false
}
