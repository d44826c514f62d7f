//! Negative polarized partition relations.
//!
//! A matrix `h : n x m -> k` witnesses the relation for `(i, j, q)` when every
//! `i x j` rectangle (any `i` rows, any `j` columns) sees more than `q`
//! distinct values.

use serde::{Deserialize, Serialize};

use crate::combinatorics::Combinations;
use crate::error::{EngineError, Result};

/// An `n x m` matrix with entries in `0..k`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolMatrixRecord", into = "PolMatrixRecord")]
pub struct PolMatrix {
    rows: usize,
    cols: usize,
    colors: usize,
    entries: Vec<u8>,
}

/// Serialized matrix: `{n, m, k, entries}` with `entries` row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolMatrixRecord {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub entries: Vec<usize>,
}

impl From<PolMatrix> for PolMatrixRecord {
    fn from(h: PolMatrix) -> Self {
        PolMatrixRecord {
            n: h.rows,
            m: h.cols,
            k: h.colors,
            entries: h.entries.iter().map(|&e| e as usize).collect(),
        }
    }
}

impl TryFrom<PolMatrixRecord> for PolMatrix {
    type Error = EngineError;

    fn try_from(r: PolMatrixRecord) -> Result<Self> {
        PolMatrix::new(r.n, r.m, r.k, r.entries)
    }
}

impl PolMatrix {
    pub fn new(rows: usize, cols: usize, colors: usize, entries: Vec<usize>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(EngineError::InvalidQuery(format!(
                "empty {rows}x{cols} matrix"
            )));
        }
        if colors == 0 || colors > 64 {
            return Err(EngineError::InvalidQuery(format!(
                "color count {colors} not in 1..=64"
            )));
        }
        if entries.len() != rows * cols {
            return Err(EngineError::InvalidQuery(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= colors) {
            return Err(EngineError::InvalidQuery(format!(
                "entry {bad} not below {colors}"
            )));
        }
        Ok(PolMatrix {
            rows,
            cols,
            colors,
            entries: entries.into_iter().map(|e| e as u8).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.entries[row * self.cols + col] as usize
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_record(&self) -> PolMatrixRecord {
        self.clone().into()
    }
}

/// Rectangle size `i x j` and the value threshold `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolQuery {
    pub i: usize,
    pub j: usize,
    pub q: usize,
}

impl PolQuery {
    fn check_bounds(&self, rows: usize, cols: usize) -> Result<()> {
        if self.i < 1 || self.i > rows || self.j < 1 || self.j > cols {
            return Err(EngineError::InvalidQuery(format!(
                "{}x{} rectangles do not fit a {rows}x{cols} matrix",
                self.i, self.j
            )));
        }
        Ok(())
    }
}

/// True iff every `i x j` rectangle of `h` takes more than `q` values.
pub fn check_witness(h: &PolMatrix, query: &PolQuery) -> Result<bool> {
    Ok(find_violation(h, query)?.is_none())
}

/// The first rectangle (in ranked combination order) taking at most `q`
/// values, as `(rows, cols)`.
pub fn find_violation(h: &PolMatrix, query: &PolQuery) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    query.check_bounds(h.rows, h.cols)?;
    let col_sets: Vec<Vec<usize>> = Combinations::new(h.cols, query.j).collect();
    for rows in Combinations::new(h.rows, query.i) {
        for cols in &col_sets {
            let mut seen = 0u64;
            for &r in &rows {
                for &c in cols {
                    seen |= 1 << h.get(r, c);
                }
            }
            if seen.count_ones() as usize <= query.q {
                return Ok(Some((rows, cols.clone())));
            }
        }
    }
    Ok(None)
}

/// The `n x n` matrix `(x + y) mod n`.
pub fn modular_witness(n: usize) -> Result<PolMatrix> {
    if n < 2 {
        return Err(EngineError::InvalidQuery(format!(
            "modular witness needs n >= 2, got {n}"
        )));
    }
    let entries = (0..n * n).map(|idx| (idx / n + idx % n) % n).collect();
    PolMatrix::new(n, n, n, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PolSearchOutcome {
    Found { matrix: PolMatrix, nodes: u64 },
    NoneFound { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

/// Backtracking search for an `n x m` witness with `k` colors.
///
/// Cells are filled row-major with colors in first-occurrence order. After
/// each cell, every rectangle it completes (its last row and last column are
/// the new cell's) is checked. Exhaustion is exact up to color renaming.
pub fn search_witness(
    rows: usize,
    cols: usize,
    colors: usize,
    query: &PolQuery,
    budget: u64,
) -> Result<PolSearchOutcome> {
    if rows == 0 || cols == 0 || colors == 0 || colors > 64 {
        return Err(EngineError::InvalidQuery(format!(
            "bad dimensions {rows}x{cols} with {colors} colors"
        )));
    }
    query.check_bounds(rows, cols)?;
    // a rectangle has at most min(k, i*j) values
    if query.q >= colors || query.q >= query.i * query.j {
        return Ok(PolSearchOutcome::NoneFound { nodes: 0 });
    }
    let row_sets: Vec<Vec<Vec<usize>>> = (0..rows)
        .map(|x| Combinations::new(x, query.i - 1).collect())
        .collect();
    let col_sets: Vec<Vec<Vec<usize>>> = (0..cols)
        .map(|y| Combinations::new(y, query.j - 1).collect())
        .collect();
    let mut state = PolSearch {
        rows,
        cols,
        colors,
        q: query.q,
        row_sets,
        col_sets,
        cells: Vec::with_capacity(rows * cols),
        nodes: 0,
        budget,
    };
    Ok(match state.run(-1) {
        Some(true) => PolSearchOutcome::Found {
            matrix: PolMatrix::new(
                rows,
                cols,
                colors,
                state.cells.iter().map(|&c| c as usize).collect(),
            )?,
            nodes: state.nodes,
        },
        Some(false) => PolSearchOutcome::NoneFound { nodes: state.nodes },
        None => PolSearchOutcome::BudgetExhausted { nodes: state.nodes },
    })
}

struct PolSearch {
    rows: usize,
    cols: usize,
    colors: usize,
    q: usize,
    row_sets: Vec<Vec<Vec<usize>>>,
    col_sets: Vec<Vec<Vec<usize>>>,
    cells: Vec<u8>,
    nodes: u64,
    budget: u64,
}

impl PolSearch {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn run(&mut self, max_used: i32) -> Option<bool> {
        let at = self.cells.len();
        if at == self.rows * self.cols {
            return Some(true);
        }
        let top = (max_used + 1).min(self.colors as i32 - 1);
        for color in 0..=top {
            if self.nodes >= self.budget {
                return None;
            }
            self.nodes += 1;
            self.cells.push(color as u8);
            if self.completed_rectangles_ok(at / self.cols, at % self.cols) {
                match self.run(max_used.max(color)) {
                    Some(false) => {}
                    other => return other,
                }
            }
            self.cells.pop();
        }
        Some(false)
    }

    fn completed_rectangles_ok(&self, x: usize, y: usize) -> bool {
        let cell = |r: usize, c: usize| self.cells[r * self.cols + c];
        for rows in &self.row_sets[x] {
            for cols in &self.col_sets[y] {
                let mut seen = 1u64 << cell(x, y);
                for &c in cols {
                    seen |= 1 << cell(x, c);
                }
                for &r in rows {
                    seen |= 1 << cell(r, y);
                    for &c in cols {
                        seen |= 1 << cell(r, c);
                    }
                }
                if seen.count_ones() as usize <= self.q {
                    return false;
                }
            }
        }
        true
    }
}
