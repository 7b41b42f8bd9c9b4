//! Exhaustive search for the longest non-dominating valid (or cyclic)
//! sequences in dimensions 1 to 3.
//!
//! The search is a depth-first walk over prefixes. A prefix is extended by
//! every reset/increment choice, in lexicographic order of the resulting
//! vector, and dropped as soon as its newest vector dominates an earlier one.
//! That pruning is exact: a dominated pair stays dominated in every
//! extension.
//!
//! # Start vectors
//!
//! Valid-mode search only tries start coordinates in `0..=B` for length
//! budget `B`, which loses nothing:
//!
//! *Lemma.* If a conforming sequence of length `L <= B + 1` exists, one
//! exists with every start coordinate at most `B`.
//!
//! *Proof sketch.* Fix a coordinate. Until its first reset it takes values
//! `s, s+1, ...`; after a reset at time `r >= 1` its value at time `t` is at
//! most `t - r <= L - 2 < B`. Replace `s` by `min(s, B)`. Values before the
//! first reset shift down by a constant and stay `>= B`, so every comparison
//! among them, and against any post-reset value, keeps its outcome. Both
//! validity and non-domination only depend on those comparisons and on the
//! step relation, which a constant shift of an increasing run preserves.
//!
//! Cyclic mode caps every value at `B`: in a cyclic sequence of length `L`
//! each coordinate is reset somewhere in every window of `L` steps, so its
//! values stay below `L <= B + 1`.
//!
//! The search extends prefixes up to length `B + 1`; reaching that length
//! means the true maximum exceeds the budget.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::model::{leq_unchecked, VectorSequence};
use crate::par::{self, Exec};

pub const MAX_SEARCH_DIM: usize = 3;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub length_budget: usize,
    pub node_budget: Option<u64>,
    /// Only explore start vectors with nondecreasing coordinates.
    pub symmetry_breaking: bool,
    pub exec: Exec,
}

impl SearchOptions {
    pub fn new(length_budget: usize) -> Self {
        SearchOptions {
            length_budget,
            node_budget: Some(DEFAULT_NODE_BUDGET),
            symmetry_breaking: false,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// `max_length` is the exact maximum.
    Exact,
    /// A conforming sequence of length `length_budget + 1` exists.
    LengthBudgetReached,
    /// Aborted after `node_budget` nodes; `max_length` is a lower bound.
    NodeBudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub max_length: usize,
    pub witness: VectorSequence,
    pub nodes_explored: u64,
    pub cap_used: u64,
    pub status: SearchStatus,
}

impl SearchResult {
    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }
}

fn check_search_dim(d: usize) -> Result<()> {
    if !(1..=MAX_SEARCH_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension {
            dim: d,
            min: 1,
            max: MAX_SEARCH_DIM,
        });
    }
    Ok(())
}

/// Shared node accounting across workers.
struct Budget {
    used: AtomicU64,
    limit: Option<u64>,
    tripped: AtomicBool,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
            tripped: AtomicBool::new(false),
        }
    }

    /// Accounts one node; false once the budget is exceeded.
    fn take(&self) -> bool {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        match self.limit {
            Some(l) if used > l => {
                self.tripped.store(true, Ordering::Relaxed);
                false
            }
            _ => !self.tripped.load(Ordering::Relaxed),
        }
    }
}

/// Depth-first walk below one start vector.
struct Walk<'a> {
    dim: usize,
    cap: Option<u64>,
    max_len: usize,
    prune: bool,
    rows: Vec<u64>,
    budget: &'a Budget,
}

impl Walk<'_> {
    fn len(&self) -> usize {
        self.rows.len() / self.dim
    }

    fn dominated(&self, w: &[u64]) -> bool {
        self.rows
            .chunks_exact(self.dim)
            .any(|v| leq_unchecked(v, w))
    }

    /// Calls `visit` on the current prefix and every conforming extension.
    /// Returns false if the node budget ran out.
    fn run(&mut self, visit: &mut dyn FnMut(&[u64])) -> bool {
        visit(&self.rows);
        if self.len() >= self.max_len {
            return true;
        }
        let d = self.dim;
        let last = self.rows[self.rows.len() - d..].to_vec();
        let mut next = vec![0u64; d];
        'mask: for mask in 0u32..(1 << d) {
            for l in 0..d {
                next[l] = if mask >> (d - 1 - l) & 1 == 1 {
                    let v = last[l] + 1;
                    if self.cap.is_some_and(|c| v > c) {
                        continue 'mask;
                    }
                    v
                } else {
                    0
                };
            }
            if self.prune && self.dominated(&next) {
                continue;
            }
            if !self.budget.take() {
                return false;
            }
            self.rows.extend_from_slice(&next);
            let ok = self.run(visit);
            self.rows.truncate(self.rows.len() - d);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// All start vectors in `[0, cap]^d`, lexicographically.
fn start_vectors(dim: usize, cap: u64, sorted_only: bool) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; dim];
    loop {
        if !sorted_only || cur.windows(2).all(|w| w[0] <= w[1]) {
            out.push(cur.clone());
        }
        let mut l = dim;
        loop {
            if l == 0 {
                return out;
            }
            l -= 1;
            if cur[l] < cap {
                cur[l] += 1;
                cur[l + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
    }
}

fn wraps(rows: &[u64], dim: usize) -> bool {
    let last = &rows[rows.len() - dim..];
    last.iter()
        .zip(&rows[..dim])
        .all(|(a, b)| *b == 0 || *b == a + 1)
}

struct Best {
    len: usize,
    rows: Vec<u64>,
    nodes: u64,
    completed: bool,
}

fn search(d: usize, cyclic: bool, opts: &SearchOptions) -> Result<SearchResult> {
    check_search_dim(d)?;
    if opts.length_budget == 0 {
        return Err(Error::UnsupportedDimension {
            dim: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let cap = opts.length_budget as u64;
    let budget = Budget::new(opts.node_budget);
    let starts = start_vectors(d, cap, opts.symmetry_breaking);

    let per_start = par::map_collect(opts.exec, &starts, |s| {
        let mut best = Best {
            len: 0,
            rows: Vec::new(),
            nodes: 0,
            completed: budget.take(),
        };
        if !best.completed {
            return best;
        }
        let mut walk = Walk {
            dim: d,
            cap: cyclic.then_some(cap),
            max_len: opts.length_budget + 1,
            prune: true,
            rows: s.clone(),
            budget: &budget,
        };
        let mut visit = |rows: &[u64]| {
            let len = rows.len() / d;
            if len > best.len && (!cyclic || wraps(rows, d)) {
                best.len = len;
                best.rows = rows.to_vec();
            }
            best.nodes += 1;
        };
        let completed = walk.run(&mut visit);
        best.completed = completed;
        best
    });

    let exhausted =
        budget.tripped.load(Ordering::Relaxed) || per_start.iter().any(|b| !b.completed);
    let nodes_explored = per_start.iter().map(|b| b.nodes).sum();
    // Strictly longer wins, so ties go to the earliest start vector.
    let best = per_start
        .into_iter()
        .fold(None::<Best>, |acc, b| match acc {
            Some(a) if a.len >= b.len => Some(a),
            _ => Some(b),
        })
        .expect("at least one start vector");
    let status = if exhausted {
        SearchStatus::NodeBudgetExhausted
    } else if best.len > opts.length_budget {
        SearchStatus::LengthBudgetReached
    } else {
        SearchStatus::Exact
    };
    Ok(SearchResult {
        max_length: best.len,
        witness: VectorSequence::from_cells(d, best.rows)?,
        nodes_explored,
        cap_used: cap,
        status,
    })
}

/// Longest non-dominating valid sequence in dimension `d`.
pub fn max_valid_length(d: usize, opts: &SearchOptions) -> Result<SearchResult> {
    search(d, false, opts)
}

/// Longest non-dominating cyclic sequence in dimension `d`.
pub fn max_cyclic_length(d: usize, opts: &SearchOptions) -> Result<SearchResult> {
    search(d, true, opts)
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub dim: usize,
    pub length: usize,
    pub cap: u64,
    pub cyclic: bool,
    /// Drop prefixes with a dominated pair early. With `false` every valid
    /// sequence is generated and filtered at full length.
    pub prune: bool,
    pub node_budget: u64,
}

impl EnumerateOptions {
    pub fn new(dim: usize, length: usize, cap: u64) -> Self {
        EnumerateOptions {
            dim,
            length,
            cap,
            cyclic: false,
            prune: true,
            node_budget: 10_000_000,
        }
    }
}

/// Calls `emit` on every valid non-dominating sequence of exactly
/// `opts.length` vectors with coordinates in `0..=cap` (cyclic ones only,
/// if requested), in lexicographic order. Returns how many were emitted.
///
/// Refuses up front when `(cap + 1)^d * 2^(d (length - 1))`, an upper
/// bound on the number of valid sequences, exceeds the node budget.
pub fn enumerate_sequences(
    opts: &EnumerateOptions,
    mut emit: impl FnMut(&VectorSequence),
) -> Result<u64> {
    let d = opts.dim;
    check_search_dim(d)?;
    if opts.length == 0 {
        emit(&VectorSequence::empty(d)?);
        return Ok(1);
    }
    let space = num_bigint::BigUint::from(opts.cap + 1).pow(d as u32) << (d * (opts.length - 1));
    if space > num_bigint::BigUint::from(opts.node_budget) {
        return Err(Error::BudgetExceeded {
            what: "sequence enumeration",
            required: space,
            budget: opts.node_budget,
        });
    }
    let budget = Budget::new(None);
    let mut emitted = 0u64;
    for s in start_vectors(d, opts.cap, false) {
        let mut walk = Walk {
            dim: d,
            cap: Some(opts.cap),
            max_len: opts.length,
            prune: opts.prune,
            rows: s,
            budget: &budget,
        };
        let mut visit = |rows: &[u64]| {
            if rows.len() / d != opts.length {
                return;
            }
            if opts.cyclic && !wraps(rows, d) {
                return;
            }
            let seq = VectorSequence::from_cells(d, rows.to_vec()).expect("whole rows");
            if !opts.prune && !pairwise_clean(&seq) {
                return;
            }
            emitted += 1;
            emit(&seq);
        };
        walk.run(&mut visit);
    }
    Ok(emitted)
}

fn pairwise_clean(seq: &VectorSequence) -> bool {
    let rows: Vec<&[u64]> = seq.rows().collect();
    (0..rows.len()).all(|j| (0..j).all(|i| !leq_unchecked(rows[i], rows[j])))
}

/// Collecting wrapper around [`enumerate_sequences`].
pub fn collect_sequences(opts: &EnumerateOptions) -> Result<Vec<VectorSequence>> {
    let mut out = Vec::new();
    enumerate_sequences(opts, |s| out.push(s.clone()))?;
    Ok(out)
}
