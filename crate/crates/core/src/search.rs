//! Exhaustive backtracking search for defeating colorings.
//!
//! Leaves are colored in lexicographic order. Two reductions keep the search
//! small without losing completeness:
//!
//! * colors are assigned in canonical first-occurrence order (color `c > 0`
//!   may appear only once `c - 1` has), so each coloring is visited once up
//!   to renaming;
//! * after each assignment the color-set families on the path from the new
//!   leaf to the root are recomputed from the assigned leaves only. Families
//!   only grow as more leaves get colors, so once the root family is nonempty
//!   some fully colored `k`-branching subtree already uses at most `m`
//!   colors, and no extension of the prefix can be defeating.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::combinatorics::Combinations;
use crate::engine::PropertyQuery;
use crate::error::{EngineError, Result};
use crate::family::{combine_subsets, ColorSetFamily, Scratch};
use crate::tree::TreeShape;

/// Outcome of one bounded search at a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { coloring: Coloring, nodes: u64 },
    NoneFound { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::NoneFound { nodes }
            | SearchOutcome::BudgetExhausted { nodes } => *nodes,
        }
    }
}

/// Knobs for [`search_counterexample_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search-tree nodes (leaf color assignments).
    pub budget: u64,
    /// Worker threads; 1 gives a fully deterministic run.
    pub parallelism: usize,
}

impl SearchOptions {
    pub fn new(budget: u64) -> Self {
        SearchOptions {
            budget,
            parallelism: 1,
        }
    }
}

/// Deterministic single-threaded search for a coloring of `T(depth, i)` with
/// `j` colors that defeats `(k, m)`.
pub fn search_counterexample(
    query: &PropertyQuery,
    depth: usize,
    budget: u64,
) -> Result<SearchOutcome> {
    search_counterexample_with(query, depth, SearchOptions::new(budget))
}

pub fn search_counterexample_with(
    query: &PropertyQuery,
    depth: usize,
    options: SearchOptions,
) -> Result<SearchOutcome> {
    if query.k > query.i {
        return Err(EngineError::EmptyDomain {
            k: query.k,
            branching: query.i,
        });
    }
    let shape = TreeShape::new(query.i, depth)?;
    if query.j > crate::coloring::MAX_COLORS {
        return Err(EngineError::InvalidQuery(format!(
            "{} colors exceed the limit",
            query.j
        )));
    }
    // Every subtree has at most min(j, k^depth) colors.
    let subtree_leaves = (query.k as u128)
        .checked_pow(depth as u32)
        .unwrap_or(u128::MAX);
    if query.j <= query.m || subtree_leaves <= query.m as u128 {
        return Ok(SearchOutcome::NoneFound { nodes: 0 });
    }
    if options.parallelism <= 1 {
        let budget = Budget::Local {
            used: 0,
            limit: options.budget,
        };
        let mut searcher = Searcher::new(shape, query, budget);
        let found = searcher.run(-1);
        let nodes = searcher.budget.used();
        return Ok(match found {
            Step::Found => SearchOutcome::Found {
                coloring: searcher.coloring(),
                nodes,
            },
            Step::Exhausted => SearchOutcome::NoneFound { nodes },
            Step::OutOfBudget => SearchOutcome::BudgetExhausted { nodes },
        });
    }
    parallel_search(shape, query, options)
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

enum Budget<'a> {
    Local {
        used: u64,
        limit: u64,
    },
    Shared {
        used: &'a AtomicU64,
        limit: u64,
        stop: &'a AtomicBool,
    },
}

impl Budget<'_> {
    /// Charges one node; false when the budget is gone or the run was stopped.
    fn charge(&mut self) -> bool {
        match self {
            Budget::Local { used, limit } => {
                if *used >= *limit {
                    return false;
                }
                *used += 1;
                true
            }
            Budget::Shared { used, limit, stop } => {
                if stop.load(Ordering::Relaxed) {
                    return false;
                }
                used.fetch_add(1, Ordering::Relaxed) < *limit
            }
        }
    }

    fn used(&self) -> u64 {
        match self {
            Budget::Local { used, .. } => *used,
            Budget::Shared { used, .. } => used.load(Ordering::Relaxed),
        }
    }
}

struct Searcher<'a> {
    shape: TreeShape,
    colors: usize,
    m: usize,
    /// families[level][node], level 0 = root, level depth = leaves
    families: Vec<Vec<ColorSetFamily>>,
    assigned: Vec<u8>,
    /// Saved (level, node, family) entries to restore on backtrack.
    undo: Vec<(usize, usize, ColorSetFamily)>,
    subsets: Vec<Vec<usize>>,
    scratch: Scratch,
    budget: Budget<'a>,
}

impl<'a> Searcher<'a> {
    fn new(shape: TreeShape, query: &PropertyQuery, budget: Budget<'a>) -> Self {
        let families = (0..=shape.depth())
            .map(|level| vec![ColorSetFamily::empty(); shape.level_width(level)])
            .collect();
        Searcher {
            shape,
            colors: query.j,
            m: query.m,
            families,
            assigned: Vec::with_capacity(shape.leaf_count()),
            undo: Vec::new(),
            subsets: Combinations::new(shape.branching(), query.k).collect(),
            scratch: Scratch::default(),
            budget,
        }
    }

    fn coloring(&self) -> Coloring {
        Coloring::new(
            self.shape,
            self.colors,
            self.assigned.iter().map(|&c| c as usize).collect(),
        )
        .expect("search produces well-formed colorings")
    }

    /// Colors the next leaf. Returns the undo mark and whether the root is
    /// now known to admit a subtree with at most `m` colors.
    fn assign(&mut self, color: u8) -> (usize, bool) {
        let mark = self.undo.len();
        let depth = self.shape.depth();
        let i = self.shape.branching();
        let leaf = self.assigned.len();
        self.assigned.push(color);
        let old = std::mem::replace(
            &mut self.families[depth][leaf],
            ColorSetFamily::singleton(color as usize),
        );
        self.undo.push((depth, leaf, old));
        let mut node = leaf;
        for level in (0..depth).rev() {
            node /= i;
            let updated = {
                let kids = &self.families[level + 1][node * i..node * i + i];
                combine_subsets(|c| &kids[c], &self.subsets, self.m, &mut self.scratch)
            };
            if updated == self.families[level][node] {
                break;
            }
            let old = std::mem::replace(&mut self.families[level][node], updated);
            self.undo.push((level, node, old));
        }
        (mark, !self.families[0][0].is_empty())
    }

    fn unassign(&mut self, mark: usize) {
        while self.undo.len() > mark {
            let (level, node, old) = self.undo.pop().expect("undo entry");
            self.families[level][node] = old;
        }
        self.assigned.pop();
    }

    fn max_used(&self) -> i32 {
        self.assigned.iter().map(|&c| c as i32).max().unwrap_or(-1)
    }

    /// DFS from the current prefix. `max_used` is the largest color so far.
    fn run(&mut self, max_used: i32) -> Step {
        if self.assigned.len() == self.shape.leaf_count() {
            return Step::Found;
        }
        let top = (max_used + 1).min(self.colors as i32 - 1);
        for color in 0..=top {
            if !self.budget.charge() {
                return Step::OutOfBudget;
            }
            let (mark, dead) = self.assign(color as u8);
            if !dead {
                match self.run(max_used.max(color)) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.unassign(mark);
        }
        Step::Exhausted
    }

    /// Collects every live canonical prefix of `length` leaves.
    fn prefixes(&mut self, length: usize, max_used: i32, out: &mut Vec<Vec<u8>>) -> bool {
        if self.assigned.len() == length {
            out.push(self.assigned.clone());
            return true;
        }
        let top = (max_used + 1).min(self.colors as i32 - 1);
        for color in 0..=top {
            if !self.budget.charge() {
                return false;
            }
            let (mark, dead) = self.assign(color as u8);
            if !dead && !self.prefixes(length, max_used.max(color), out) {
                return false;
            }
            self.unassign(mark);
        }
        true
    }
}

fn parallel_search(
    shape: TreeShape,
    query: &PropertyQuery,
    options: SearchOptions,
) -> Result<SearchOutcome> {
    let used = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let target_shards = options.parallelism * 16;

    let mut shards = Vec::new();
    let mut length = 0;
    {
        let mut seeder = Searcher::new(
            shape,
            query,
            Budget::Shared {
                used: &used,
                limit: options.budget,
                stop: &stop,
            },
        );
        while length < shape.leaf_count() {
            length += 1;
            shards.clear();
            if !seeder.prefixes(length, -1, &mut shards) {
                return Ok(SearchOutcome::BudgetExhausted {
                    nodes: used.load(Ordering::Relaxed),
                });
            }
            if shards.len() >= target_shards {
                break;
            }
        }
    }
    if shards.is_empty() {
        return Ok(SearchOutcome::NoneFound {
            nodes: used.load(Ordering::Relaxed),
        });
    }
    if length == shape.leaf_count() {
        // prefixes are complete colorings that survived every prune
        let coloring = Coloring::new(
            shape,
            query.j,
            shards[0].iter().map(|&c| c as usize).collect(),
        )?;
        return Ok(SearchOutcome::Found {
            coloring,
            nodes: used.load(Ordering::Relaxed),
        });
    }

    let next = AtomicUsize::new(0);
    let found: Mutex<Option<(usize, Coloring)>> = Mutex::new(None);
    let out_of_budget = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..options.parallelism {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= shards.len() || stop.load(Ordering::Relaxed) {
                    break;
                }
                let mut worker = Searcher::new(
                    shape,
                    query,
                    Budget::Shared {
                        used: &used,
                        limit: options.budget,
                        stop: &stop,
                    },
                );
                let mut max_used = -1;
                for &c in &shards[index] {
                    worker.assign(c);
                    max_used = max_used.max(c as i32);
                }
                debug_assert_eq!(worker.max_used(), max_used);
                match worker.run(max_used) {
                    Step::Found => {
                        let mut slot = found.lock().expect("result lock");
                        if slot.as_ref().is_none_or(|(i, _)| index < *i) {
                            *slot = Some((index, worker.coloring()));
                        }
                        stop.store(true, Ordering::Relaxed);
                    }
                    Step::OutOfBudget => {
                        if !stop.load(Ordering::Relaxed) {
                            out_of_budget.store(true, Ordering::Relaxed);
                        }
                        stop.store(true, Ordering::Relaxed);
                    }
                    Step::Exhausted => {}
                }
            });
        }
    });
    let nodes = used.load(Ordering::Relaxed).min(options.budget);
    if let Some((_, coloring)) = found.into_inner().expect("result lock") {
        return Ok(SearchOutcome::Found { coloring, nodes });
    }
    if out_of_budget.load(Ordering::Relaxed) {
        return Ok(SearchOutcome::BudgetExhausted { nodes });
    }
    Ok(SearchOutcome::NoneFound { nodes })
}
