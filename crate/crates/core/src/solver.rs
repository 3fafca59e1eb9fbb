//! Exact achromatic number of `K_p □ K_q` for small `p·q` by depth-first
//! branch and bound over colour matrices.
//!
//! Cells are filled in row-major order. The first row is fixed to colours
//! `1..=q` and new colours are numbered in order of first use, so every
//! matrix is searched in exactly one relabelled form. At each cell the
//! search tries the existing colours allowed by the row and column in
//! ascending order, then one fresh colour; together with strict improvement
//! this makes the reported witness the lexicographically smallest optimum.
//!
//! A node is cut when its upper bound cannot beat the incumbent. The bound
//! is the minimum of
//! - colours used plus unfilled cells,
//! - the largest colour count allowed by the minimum-frequency constraints
//!   ([`crate::bounds::lemma1_cap`]),
//! - the largest `a` with `a(a-1)/2` at most the pairs already covered plus
//!   the collinear cell pairs not yet fully filled.
//!
//! If the colours already used cannot all be paired up by the remaining
//! cells the node is infeasible and its bound is 0.

use std::time::{Duration, Instant};

use log::info;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::lemma1_cap;
use crate::colouring::{Colour, ColourMatrix};

/// Colours are tracked in 128-bit masks.
pub const MAX_CELLS: usize = 128;

const EMPTY: u8 = u8::MAX;
const PROGRESS_INTERVAL: u64 = 1 << 22;
const CLOCK_INTERVAL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("dimensions must be positive, got {p}x{q}")]
    EmptyDimension { p: usize, q: usize },
    #[error("{p}x{q} has {} cells, more than the supported {MAX_CELLS}", p * q)]
    TooLarge { p: usize, q: usize },
    #[error("colour {colour} is not allowed at the next cell")]
    IllegalPlacement { colour: usize },
    #[error("the node is already full")]
    NodeFull,
}

/// A partially filled matrix: the first `filled` cells in row-major order
/// hold colours, the rest are empty. Always row and column proper.
#[derive(Debug, Clone)]
pub struct SearchNode {
    p: usize,
    q: usize,
    cells: Vec<u8>,
    filled: usize,
    used: usize,
    row_mask: Vec<u128>,
    col_mask: Vec<u128>,
    /// `pair_lines[a * MAX_CELLS + b]`: number of lines holding both a and b.
    pair_lines: Vec<u16>,
    covered: usize,
    /// Collinear pairs of filled cells.
    filled_pairs: usize,
    total_pairs: usize,
    lemma_cap: usize,
}

impl SearchNode {
    pub fn new(p: usize, q: usize) -> Result<Self, SolverError> {
        if p == 0 || q == 0 {
            return Err(SolverError::EmptyDimension { p, q });
        }
        if p * q > MAX_CELLS {
            return Err(SolverError::TooLarge { p, q });
        }
        Ok(SearchNode {
            p,
            q,
            cells: vec![EMPTY; p * q],
            filled: 0,
            used: 0,
            row_mask: vec![0; p],
            col_mask: vec![0; q],
            pair_lines: vec![0; MAX_CELLS * MAX_CELLS],
            covered: 0,
            filled_pairs: 0,
            total_pairs: p * q * (q - 1) / 2 + q * p * (p - 1) / 2,
            lemma_cap: lemma1_cap(p as u64, q as u64) as usize,
        })
    }

    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn is_full(&self) -> bool {
        self.filled == self.p * self.q
    }

    pub fn colours_used(&self) -> usize {
        self.used
    }

    /// Colour pairs sharing at least one line so far.
    pub fn covered_pairs(&self) -> usize {
        self.covered
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.used * self.used.saturating_sub(1) / 2
    }

    fn position(&self) -> (usize, usize) {
        (self.filled / self.q, self.filled % self.q)
    }

    /// Colours allowed at the next cell: existing ones first (ascending), then
    /// the next fresh colour.
    pub fn candidates(&self) -> Vec<usize> {
        if self.is_full() {
            return Vec::new();
        }
        let (i, j) = self.position();
        let blocked = self.row_mask[i] | self.col_mask[j];
        let mut out: Vec<usize> = (0..self.used).filter(|&c| blocked & (1 << c) == 0).collect();
        if self.used < MAX_CELLS {
            out.push(self.used);
        }
        out
    }

    /// Fills the next cell with `colour` (0-based, at most `colours_used()`).
    pub fn place(&mut self, colour: usize) -> Result<(), SolverError> {
        if self.is_full() {
            return Err(SolverError::NodeFull);
        }
        let (i, j) = self.position();
        let blocked = self.row_mask[i] | self.col_mask[j];
        if colour > self.used || colour >= MAX_CELLS || blocked & (1 << colour) != 0 {
            return Err(SolverError::IllegalPlacement { colour });
        }
        self.place_unchecked(colour);
        Ok(())
    }

    fn place_unchecked(&mut self, c: usize) {
        let (i, j) = self.position();
        for mask in [self.row_mask[i], self.col_mask[j]] {
            let mut m = mask;
            while m != 0 {
                let d = m.trailing_zeros() as usize;
                m &= m - 1;
                let slot = &mut self.pair_lines[c * MAX_CELLS + d];
                if *slot == 0 {
                    self.covered += 1;
                }
                *slot += 1;
                self.pair_lines[d * MAX_CELLS + c] += 1;
            }
        }
        self.row_mask[i] |= 1 << c;
        self.col_mask[j] |= 1 << c;
        self.cells[self.filled] = c as u8;
        if c == self.used {
            self.used += 1;
        }
        // Row-major order: j cells to the left and i cells above are filled.
        self.filled_pairs += i + j;
        self.filled += 1;
    }

    fn unplace(&mut self) {
        self.filled -= 1;
        let (i, j) = self.position();
        self.filled_pairs -= i + j;
        let c = self.cells[self.filled] as usize;
        self.cells[self.filled] = EMPTY;
        self.row_mask[i] &= !(1 << c);
        self.col_mask[j] &= !(1 << c);
        if c + 1 == self.used && !self.row_mask.iter().any(|m| m & (1 << c) != 0) {
            self.used -= 1;
        }
        for mask in [self.row_mask[i], self.col_mask[j]] {
            let mut m = mask;
            while m != 0 {
                let d = m.trailing_zeros() as usize;
                m &= m - 1;
                let slot = &mut self.pair_lines[c * MAX_CELLS + d];
                *slot -= 1;
                if *slot == 0 {
                    self.covered -= 1;
                }
                self.pair_lines[d * MAX_CELLS + c] -= 1;
            }
        }
    }

    /// Upper bound on the colour count of any proper complete completion of
    /// this node, or 0 if no completion can be complete.
    pub fn prune_bound(&self) -> usize {
        let k = self.used;
        let pair_budget = self.covered + (self.total_pairs - self.filled_pairs);
        if k * k.saturating_sub(1) / 2 > pair_budget {
            return 0;
        }
        if self.is_full() {
            return k;
        }
        let mut by_pairs = k;
        while (by_pairs + 1) * by_pairs / 2 <= pair_budget {
            by_pairs += 1;
        }
        let remaining = self.p * self.q - self.filled;
        (k + remaining).min(self.lemma_cap).min(by_pairs)
    }

    /// The filled matrix with colours `1..=k`. Panics unless full.
    pub fn to_matrix(&self) -> ColourMatrix {
        assert!(self.is_full(), "node is not full");
        let cells = self.cells.iter().map(|&c| Colour::Index(c as u64 + 1)).collect();
        ColourMatrix::new(self.p, self.q, cells).expect("dimensions checked")
    }
}

/// See [`SearchNode::prune_bound`].
pub fn prune_bound(node: &SearchNode) -> usize {
    node.prune_bound()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// The value is the achromatic number.
    Optimal,
    /// The budget ran out; the value is only a lower bound.
    TimedOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub p: usize,
    pub q: usize,
    pub value: usize,
    pub status: SolveStatus,
    pub nodes: u64,
    pub witness: ColourMatrix,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// The achromatic number of `K_p □ K_q`, with a witness colouring.
///
/// `budget = None` runs to completion. On timeout the best colouring found
/// so far is returned with [`SolveStatus::TimedOut`].
pub fn achromatic_exact(p: usize, q: usize, budget: Option<Duration>) -> Result<Solution, SolverError> {
    let mut search = Search {
        node: SearchNode::new(p, q)?,
        best: 0,
        best_cells: None,
        nodes: 0,
        deadline: budget.map(|b| Instant::now() + b),
        timed_out: false,
    };

    // Any Latin-rectangle colouring uses max(p, q) colours and is complete,
    // so only strictly larger counts need a witness from the search; the
    // incumbent stays one below to keep the lexicographic tie-break.
    let chromatic = p.max(q);
    search.best = chromatic - 1;

    for c in 0..q {
        search.node.place_unchecked(c);
    }
    search.dfs();

    let (value, witness) = match search.best_cells {
        Some(cells) => {
            let witness = ColourMatrix::new(
                p,
                q,
                cells.iter().map(|&c| Colour::Index(c as u64 + 1)).collect(),
            )
            .expect("dimensions checked");
            (search.best, witness)
        }
        None => (chromatic, latin_rectangle(p, q)),
    };
    Ok(Solution {
        p,
        q,
        value,
        status: if search.timed_out {
            SolveStatus::TimedOut
        } else {
            SolveStatus::Optimal
        },
        nodes: search.nodes,
        witness,
    })
}

fn latin_rectangle(p: usize, q: usize) -> ColourMatrix {
    let n = p.max(q);
    let cells = (0..p)
        .flat_map(|i| (0..q).map(move |j| Colour::Index(((i + j) % n) as u64 + 1)))
        .collect();
    ColourMatrix::new(p, q, cells).expect("dimensions checked")
}

struct Search {
    node: SearchNode,
    best: usize,
    best_cells: Option<Vec<u8>>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search {
    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(CLOCK_INTERVAL) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out = true;
                }
            }
        }
        if self.nodes.is_multiple_of(PROGRESS_INTERVAL) {
            info!(
                "{}x{}: {} nodes expanded, best {}",
                self.node.p, self.node.q, self.nodes, self.best
            );
        }
        if self.timed_out {
            return;
        }
        if self.node.is_full() {
            if self.node.is_complete() && self.node.used > self.best {
                self.best = self.node.used;
                self.best_cells = Some(self.node.cells.clone());
            }
            return;
        }
        if self.node.prune_bound() <= self.best {
            return;
        }
        for c in self.node.candidates() {
            self.node.place_unchecked(c);
            self.dfs();
            self.node.unplace();
            if self.timed_out {
                return;
            }
        }
    }
}
