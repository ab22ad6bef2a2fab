//! Exact avoidability decisions for small orders: depth-first search over
//! cells in lexicographic order with per-line availability masks and
//! fail-first forward checking. Ground truth for the randomized engine.

use crate::cube::{Cell, LatinCube};
use crate::error::Error;
use crate::forbidden::ForbiddenCube;

/// Default node budget; bounds worst-case runtime on order 5-6 probes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
/// Full enumeration is only offered at tiny orders.
pub const ENUMERATION_MAX_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    /// A Latin cube avoiding the instance, with the witness.
    Avoidable(LatinCube),
    /// Exhaustive search ruled every Latin cube out.
    Unavoidable,
    /// The node budget ran out before the search finished.
    BudgetExceeded { nodes: u64 },
}

struct Search {
    n: usize,
    entries: Vec<u16>,
    row_avail: Vec<u128>,  // (i*n + k) -> free symbols in row
    col_avail: Vec<u128>,  // (j*n + k)
    file_avail: Vec<u128>, // (i*n + j)
    forbidden: Vec<u128>,  // flat cell -> forbidden symbols
    nodes: u64,
    budget: u64,
}

enum Flow {
    /// Keep searching siblings.
    Continue,
    /// A visitor asked to stop (witness found / limit reached).
    Stop,
    /// Node budget exhausted.
    Budget,
}

impl Search {
    fn new(a: &ForbiddenCube, budget: u64) -> Self {
        let n = a.n();
        let full = if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        };
        Search {
            n,
            entries: vec![0u16; n * n * n],
            row_avail: vec![full; n * n],
            col_avail: vec![full; n * n],
            file_avail: vec![full; n * n],
            forbidden: a.symbol_masks(),
            nodes: 0,
            budget,
        }
    }

    #[inline]
    fn candidates(&self, i: usize, j: usize, k: usize) -> u128 {
        let n = self.n;
        self.row_avail[i * n + k]
            & self.col_avail[j * n + k]
            & self.file_avail[i * n + j]
            & !self.forbidden[(i * n + j) * n + k]
    }

    /// Any unfilled cell in the lines through (i, j, k) with no candidates
    /// left? Cells are filled in lexicographic order, so the unfilled ones
    /// are exactly those with a larger coordinate along each line.
    fn dead_end(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.n;
        for j2 in j + 1..n {
            if self.candidates(i, j2, k) == 0 {
                return true;
            }
        }
        for i2 in i + 1..n {
            if self.candidates(i2, j, k) == 0 {
                return true;
            }
        }
        for k2 in k + 1..n {
            if self.candidates(i, j, k2) == 0 {
                return true;
            }
        }
        false
    }

    fn run<F: FnMut(&[u16]) -> bool>(&mut self, pos: usize, visit: &mut F) -> Flow {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Flow::Budget;
        }
        let n = self.n;
        if pos == n * n * n {
            return if visit(&self.entries) {
                Flow::Stop
            } else {
                Flow::Continue
            };
        }
        let cell = Cell::from_flat(pos, n);
        let (i, j, k) = (cell.i, cell.j, cell.k);
        let mut avail = self.candidates(i, j, k);
        while avail != 0 {
            let s = avail.trailing_zeros() as usize;
            avail &= avail - 1;
            let bit = 1u128 << s;
            self.entries[pos] = s as u16;
            self.row_avail[i * n + k] &= !bit;
            self.col_avail[j * n + k] &= !bit;
            self.file_avail[i * n + j] &= !bit;
            let flow = if self.dead_end(i, j, k) {
                Flow::Continue
            } else {
                self.run(pos + 1, visit)
            };
            self.row_avail[i * n + k] |= bit;
            self.col_avail[j * n + k] |= bit;
            self.file_avail[i * n + j] |= bit;
            match flow {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}

/// Decides whether `a` is avoidable by exhaustive backtracking.
///
/// `Unavoidable` is only reported after the whole search space has been
/// ruled out within the budget. Nodes are counted per visited partial
/// assignment, so counts are reproducible.
pub fn decide_avoidable(a: &ForbiddenCube, node_budget: u64) -> OracleOutcome {
    let mut search = Search::new(a, node_budget);
    let mut witness: Option<Vec<u16>> = None;
    let flow = search.run(0, &mut |entries| {
        witness = Some(entries.to_vec());
        true
    });
    match flow {
        Flow::Stop => {
            let cube = LatinCube::from_entries(a.n(), witness.expect("witness recorded"))
                .expect("search fills valid symbols");
            debug_assert!(cube.validate().is_ok());
            OracleOutcome::Avoidable(cube)
        }
        Flow::Continue => OracleOutcome::Unavoidable,
        Flow::Budget => OracleOutcome::BudgetExceeded {
            nodes: search.nodes,
        },
    }
}

/// All Latin cubes avoiding `a`, in lexicographic order of their flattened
/// entries, truncated at `limit`. Orders above 4 are rejected.
pub fn enumerate_avoiders(a: &ForbiddenCube, limit: usize) -> Result<Vec<LatinCube>, Error> {
    if a.n() > ENUMERATION_MAX_N {
        return Err(Error::EnumerationOrderTooLarge {
            n: a.n(),
            max: ENUMERATION_MAX_N,
        });
    }
    let mut out = Vec::new();
    let mut search = Search::new(a, u64::MAX);
    search.run(0, &mut |entries| {
        if out.len() < limit {
            out.push(
                LatinCube::from_entries(a.n(), entries.to_vec()).expect("valid symbols"),
            );
        }
        out.len() >= limit
    });
    Ok(out)
}
