//! The two-phase solver: sample a layer/symbol permutation of the Boolean
//! cube whose conflict statistics pass the thresholds, then cover every
//! conflict with pairwise disjoint allowed 3-cubes chosen under the overload
//! bookkeeping, and swap them all.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::{Cell, LatinCube, PermutationQuadruple, StructuredCube};
use crate::error::Error;
use crate::forbidden::{conflict_stats, conflicts, ConflictReport, ForbiddenCube};
use crate::structure::{
    line_of, swap, three_cube_symbols, BlockFamily, BlockId, LineFamily, LineId, ThreeCube,
};

/// Thresholds and search budgets for one solve.
///
/// `alpha`, `kappa`, `epsilon`, `theta` are fractions of n. The defaults are
/// desk-scale choices that keep every code path live at n <= 128. Swaps
/// deposit used cells on a line two at a time, so overload thresholds below
/// epsilon n = 4 degenerate (every touched line overloads after at most two
/// swaps); epsilon = theta = 0.5 keeps small orders workable while still
/// binding on dense instances. The published constants (usable with the
/// bounds evaluators) sit behind `with_paper_constants`, but note they force
/// kappa n < 1 at desk orders, which demands conflict-free permutations.
#[derive(Debug, Clone)]
pub struct SolverParams {
    pub alpha: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub theta: f64,
    pub permutation_samples: usize,
    pub max_restarts: usize,
    pub seed: u64,
    pub strict_thresholds: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            alpha: 0.5,
            kappa: 0.25,
            epsilon: 0.5,
            theta: 0.5,
            permutation_samples: 64,
            max_restarts: 20,
            seed: 0,
            strict_thresholds: false,
        }
    }
}

impl SolverParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// alpha = 1 - 38/2^25, kappa = 6/2^25, epsilon = 2^-6, theta = 2^-12.
    pub fn with_paper_constants(mut self) -> Self {
        self.alpha = 1.0 - 38.0 * 2f64.powi(-25);
        self.kappa = 6.0 * 2f64.powi(-25);
        self.epsilon = 2f64.powi(-6);
        self.theta = 2f64.powi(-12);
        self
    }

    /// Ranges only; enough for the permutation search.
    pub fn validate_thresholds(&self) -> Result<(), Error> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParams {
                reason: format!("alpha = {} outside (0, 1]", self.alpha),
            });
        }
        for (name, v) in [
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("theta", self.theta),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidParams {
                    reason: format!("{name} = {v} must be positive"),
                });
            }
        }
        if self.permutation_samples == 0 {
            return Err(Error::InvalidParams {
                reason: "permutation_samples must be at least 1".into(),
            });
        }
        Ok(())
    }

    /// Full check for the swap phase: strict runs additionally need
    /// epsilon * n >= 3 (the swap-phase hypothesis).
    pub fn validate(&self, n: usize) -> Result<(), Error> {
        self.validate_thresholds()?;
        if self.strict_thresholds && self.epsilon * n as f64 - 3.0 < 0.0 {
            return Err(Error::InvalidParams {
                reason: format!(
                    "strict thresholds need epsilon*n >= 3, got {}",
                    self.epsilon * n as f64
                ),
            });
        }
        Ok(())
    }
}

// Decorrelated per-purpose seeds derived from the user seed (splitmix64).
fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const QUADRUPLE_STREAM: u64 = 1;
const PLAN_STREAM: u64 = 2;

/// Sum of threshold excesses over conditions (a)-(e) plus the allowed-count
/// deficiency; zero exactly when all six thresholds are met.
pub fn violation_score(report: &ConflictReport, params: &SolverParams, n: usize) -> f64 {
    let cap = params.kappa * n as f64;
    let need = params.alpha * n as f64;
    let over = |v: usize| (v as f64 - cap).max(0.0);
    over(report.max_row)
        + over(report.max_column)
        + over(report.max_file)
        + over(report.max_symbol_set)
        + over(report.max_transversal_set)
        + (need - report.min_allowed as f64).max(0.0)
}

fn meets_thresholds(report: &ConflictReport, params: &SolverParams, n: usize) -> bool {
    let cap = params.kappa * n as f64;
    (report.max_row as f64) <= cap
        && (report.max_column as f64) <= cap
        && (report.max_file as f64) <= cap
        && (report.max_symbol_set as f64) <= cap
        && (report.max_transversal_set as f64) <= cap
        && (report.min_allowed as f64) >= params.alpha * n as f64
}

/// A permutation that passed (or best approached) the six thresholds.
#[derive(Debug, Clone)]
pub struct PermutationSearch {
    pub cube: StructuredCube,
    pub report: ConflictReport,
    pub score: f64,
    pub samples_tried: usize,
}

/// Strict-mode failure: no sampled quadruple met every threshold.
#[derive(Debug, Clone)]
pub struct StrictSearchFailure {
    pub best_report: ConflictReport,
    pub best_score: f64,
    pub samples_tried: usize,
}

impl fmt::Display for StrictSearchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no quadruple met the thresholds in {} samples (best score {}, best report {})",
            self.samples_tried, self.best_score, self.best_report
        )
    }
}

impl std::error::Error for StrictSearchFailure {}

/// Samples random quadruples and returns the first whose conflict statistics
/// meet all six thresholds, or (non-strict) the best-scoring one.
pub fn find_permutation(
    t: u32,
    a: &ForbiddenCube,
    params: &SolverParams,
) -> Result<PermutationSearch, StrictSearchFailure> {
    let n = 1usize << t;
    assert_eq!(a.n(), n, "instance order must be 2^t");
    params.validate_thresholds().expect("validated parameters");
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, QUADRUPLE_STREAM));
    let mut best: Option<PermutationSearch> = None;
    for sample in 1..=params.permutation_samples {
        let q = PermutationQuadruple::random(n, &mut rng);
        let cube = StructuredCube::new(t, q).expect("t within cap");
        let report = conflict_stats(&cube, a).expect("orders match");
        let score = violation_score(&report, params, n);
        if score == 0.0 && meets_thresholds(&report, params, n) {
            return Ok(PermutationSearch {
                cube,
                report,
                score,
                samples_tried: sample,
            });
        }
        if best.as_ref().is_none_or(|b| score < b.score) {
            best = Some(PermutationSearch {
                cube,
                report,
                score,
                samples_tried: sample,
            });
        }
    }
    let mut best = best.expect("at least one sample");
    best.samples_tried = params.permutation_samples;
    if params.strict_thresholds {
        Err(StrictSearchFailure {
            best_score: best.score,
            best_report: best.report,
            samples_tried: best.samples_tried,
        })
    } else {
        Ok(best)
    }
}

/// Used-cell counters for every block (threshold theta n^2) and every line,
/// transversal-set and symbol-set (threshold epsilon n).
#[derive(Debug, Clone)]
pub struct OverloadLedger {
    n: usize,
    block_threshold: f64,
    line_threshold: f64,
    blocks: [Vec<u32>; 10],
    lines: [Vec<u32>; 7],
    used_cells: usize,
}

impl OverloadLedger {
    pub fn new(n: usize, theta: f64, epsilon: f64) -> Self {
        OverloadLedger {
            n,
            block_threshold: theta * (n * n) as f64,
            line_threshold: epsilon * n as f64,
            blocks: std::array::from_fn(|_| vec![0u32; n]),
            lines: std::array::from_fn(|_| vec![0u32; n * n]),
            used_cells: 0,
        }
    }

    fn block_slot(family: BlockFamily) -> usize {
        crate::structure::BLOCK_FAMILIES
            .iter()
            .position(|f| *f == family)
            .expect("family listed")
    }

    fn line_slot(family: LineFamily) -> usize {
        crate::structure::LINE_FAMILIES
            .iter()
            .position(|f| *f == family)
            .expect("family listed")
    }

    /// Counts one used cell in all ten blocks and seven lines through it.
    pub fn mark_used(&mut self, cube: &StructuredCube, cell: Cell) {
        let n = self.n;
        for family in crate::structure::BLOCK_FAMILIES {
            let id = crate::structure::block_of(cube, family, cell);
            self.blocks[Self::block_slot(family)][id.index] += 1;
        }
        for family in crate::structure::LINE_FAMILIES {
            let id = line_of(cube, family, cell);
            self.lines[Self::line_slot(family)][id.a * n + id.b] += 1;
        }
        self.used_cells += 1;
    }

    pub fn block_used(&self, id: BlockId) -> usize {
        self.blocks[Self::block_slot(id.family)][id.index] as usize
    }

    pub fn line_used(&self, id: LineId) -> usize {
        self.lines[Self::line_slot(id.family)][id.a * self.n + id.b] as usize
    }

    /// A block is overloaded once it holds at least theta n^2 used cells.
    pub fn block_overloaded(&self, id: BlockId) -> bool {
        self.block_used(id) as f64 >= self.block_threshold
    }

    /// A line/set is overloaded once it holds at least epsilon n used cells.
    pub fn line_overloaded(&self, id: LineId) -> bool {
        self.line_used(id) as f64 >= self.line_threshold
    }

    pub fn used_cells(&self) -> usize {
        self.used_cells
    }

    /// Largest used-cell count over every line, set and transversal-set.
    pub fn max_line_used(&self) -> usize {
        self.lines
            .iter()
            .flat_map(|v| v.iter())
            .copied()
            .max()
            .unwrap_or(0) as usize
    }

    /// True iff every counter equals a from-scratch recount of the plan.
    pub fn matches_recount(&self, cube: &StructuredCube, plan: &SwapPlan) -> bool {
        let mut fresh = OverloadLedger::new(self.n, 0.0, 0.0);
        for tc in plan.three_cubes() {
            for cell in tc.cells() {
                fresh.mark_used(cube, cell);
            }
        }
        fresh.blocks == self.blocks
            && fresh.lines == self.lines
            && fresh.used_cells == self.used_cells
    }
}

/// A set of pairwise disjoint allowed 3-cubes covering every conflict, each
/// conflict anchoring exactly one of them.
#[derive(Debug, Clone, Default)]
pub struct SwapPlan {
    three_cubes: Vec<ThreeCube>,
    covered: BTreeMap<u32, usize>,
    n: usize,
}

impl SwapPlan {
    pub fn three_cubes(&self) -> &[ThreeCube] {
        &self.three_cubes
    }

    pub fn len(&self) -> usize {
        self.three_cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.three_cubes.is_empty()
    }

    /// Conflict cells with the index of the plan 3-cube covering each.
    pub fn covered_conflicts(&self) -> impl Iterator<Item = (Cell, usize)> + '_ {
        self.covered
            .iter()
            .map(move |(&flat, &idx)| (Cell::from_flat(flat as usize, self.n), idx))
    }

    pub fn used_cell_count(&self) -> usize {
        8 * self.three_cubes.len()
    }
}

/// Why one candidate second column was rejected for a conflict.
#[derive(Debug, Clone, PartialEq)]
pub enum Elimination {
    BlockOverloaded(BlockId),
    LineOverloaded(LineId),
    ConflictCell(Cell),
    UsedCell(Cell),
    NotAllowed,
}

impl fmt::Display for Elimination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elimination::BlockOverloaded(id) => write!(f, "{id} overloaded"),
            Elimination::LineOverloaded(id) => write!(f, "{id} overloaded"),
            Elimination::ConflictCell(cell) => write!(f, "cell {cell} is a conflict"),
            Elimination::UsedCell(cell) => write!(f, "cell {cell} already used"),
            Elimination::NotAllowed => write!(f, "swap would land on a forbidden symbol"),
        }
    }
}

/// A conflict for which every candidate 3-cube was eliminated.
#[derive(Debug, Clone)]
pub struct PlanFailure {
    pub conflict: Cell,
    /// (j2, reason) for every candidate in the order tried.
    pub eliminations: Vec<(usize, Elimination)>,
}

impl fmt::Display for PlanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no admissible 3-cube for conflict {} ({} candidates eliminated",
            self.conflict,
            self.eliminations.len()
        )?;
        if let Some((j2, reason)) = self.eliminations.first() {
            write!(f, "; first: j2={}: {reason}", j2 + 1)?;
        }
        write!(f, ")")
    }
}

impl std::error::Error for PlanFailure {}

/// Greedy plan construction, following the selection rules of the swap
/// phase: for each conflict in lexicographic order, scan candidate second
/// columns in seeded-shuffled order and accept the first whose 3-cube
/// passes all of
///   (1) none of the ten named blocks/layers is overloaded,
///   (2) none of the nine lines, three transversal-sets and nine
///       symbol-sets through its non-anchor cells is overloaded,
///   (3) its seven non-anchor cells are neither conflicts nor already used,
/// and which is allowed. Allowed-ness is always evaluated against the
/// pre-swap cube; disjointness keeps that valid under later swaps.
pub fn build_swap_plan(
    cube: &StructuredCube,
    a: &ForbiddenCube,
    params: &SolverParams,
) -> Result<(SwapPlan, OverloadLedger), PlanFailure> {
    let n = cube.n();
    params.validate(n).expect("validated parameters");
    let conflict_list = conflicts(cube.cube(), a).expect("orders match");
    let cells_total = n * n * n;
    let mut is_conflict = vec![false; cells_total];
    for c in &conflict_list {
        is_conflict[c.flat(n)] = true;
    }
    let mut used = vec![false; cells_total];
    let mut ledger = OverloadLedger::new(n, params.theta, params.epsilon);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, PLAN_STREAM));
    let mut plan = SwapPlan {
        three_cubes: Vec::with_capacity(conflict_list.len()),
        covered: BTreeMap::new(),
        n,
    };
    let mut candidates: Vec<usize> = Vec::with_capacity(n - 1);

    for &anchor in &conflict_list {
        debug_assert!(!used[anchor.flat(n)], "conflicts are never used as side cells");
        candidates.clear();
        candidates.extend((0..n).filter(|&j2| j2 != anchor.j));
        candidates.shuffle(&mut rng);
        let mut eliminations: Vec<(usize, Elimination)> = Vec::new();
        let mut selected = None;
        for &j2 in &candidates {
            match try_candidate(cube, a, &ledger, &is_conflict, &used, anchor, j2) {
                Ok(tc) => {
                    selected = Some(tc);
                    break;
                }
                Err(reason) => eliminations.push((j2, reason)),
            }
        }
        let Some(tc) = selected else {
            return Err(PlanFailure {
                conflict: anchor,
                eliminations,
            });
        };
        let idx = plan.three_cubes.len();
        for cell in tc.cells() {
            used[cell.flat(n)] = true;
            ledger.mark_used(cube, cell);
        }
        plan.three_cubes.push(tc);
        plan.covered.insert(anchor.flat(n) as u32, idx);
    }
    Ok((plan, ledger))
}

/// Applies the selection conditions to the 3-cube determined by
/// (anchor, j2). The block and set identities below mirror the selection
/// rules: with delta the XOR of the two column pullbacks, the completing
/// row/file pullbacks are the anchor's shifted by delta, so every id is a
/// pullback XOR of anchor coordinates.
fn try_candidate(
    cube: &StructuredCube,
    a: &ForbiddenCube,
    ledger: &OverloadLedger,
    is_conflict: &[bool],
    used: &[bool],
    anchor: Cell,
    j2: usize,
) -> Result<ThreeCube, Elimination> {
    let n = cube.n();
    let (i1, j1, k1) = (anchor.i, anchor.j, anchor.k);
    let x1 = cube.get(i1, j1, k1);
    let x2 = cube.get(i1, j2, k1);
    let i2 = cube.col_inverse(j2, k1, x1);
    let k2 = cube.file_inverse(i1, j1, x2);

    // (1) Ten blocks: the three completing layers, the row block of
    // R_{i2,k1}, the column block of C_{j2,k1}, the file block of F_{i1,j2},
    // the three symbol-* blocks through the x2 cells, and the symbol block
    // of x2.
    let p1i1 = cube.p1(i1);
    let p1i2 = cube.p1(i2);
    let p2j2 = cube.p2(j2);
    let p3k1 = cube.p3(k1);
    let blocks = [
        BlockId { family: BlockFamily::RowLayer, index: i2 },
        BlockId { family: BlockFamily::ColumnLayer, index: j2 },
        BlockId { family: BlockFamily::FileLayer, index: k2 },
        BlockId { family: BlockFamily::RowBlock, index: p1i2 ^ p3k1 },
        BlockId { family: BlockFamily::ColumnBlock, index: p2j2 ^ p3k1 },
        BlockId { family: BlockFamily::FileBlock, index: p1i1 ^ p2j2 },
        BlockId { family: BlockFamily::SymbolRowBlock, index: p2j2 ^ p3k1 },
        BlockId { family: BlockFamily::SymbolColumnBlock, index: p1i2 ^ p3k1 },
        BlockId { family: BlockFamily::SymbolFileBlock, index: p1i1 ^ p2j2 },
        BlockId { family: BlockFamily::SymbolBlock, index: p1i1 ^ p2j2 ^ p3k1 },
    ];
    for id in blocks {
        if ledger.block_overloaded(id) {
            return Err(Elimination::BlockOverloaded(id));
        }
    }

    // (2a) The nine rows, columns and files through the non-anchor cells.
    let lines = [
        LineId { family: LineFamily::Row, a: i2, b: k1 },
        LineId { family: LineFamily::Row, a: i1, b: k2 },
        LineId { family: LineFamily::Row, a: i2, b: k2 },
        LineId { family: LineFamily::Column, a: j2, b: k1 },
        LineId { family: LineFamily::Column, a: j1, b: k2 },
        LineId { family: LineFamily::Column, a: j2, b: k2 },
        LineId { family: LineFamily::File, a: i1, b: j2 },
        LineId { family: LineFamily::File, a: i2, b: j1 },
        LineId { family: LineFamily::File, a: i2, b: j2 },
    ];
    for id in lines {
        if ledger.line_overloaded(id) {
            return Err(Elimination::LineOverloaded(id));
        }
    }

    // (2b) The transversal-sets through the three non-anchor file-layer-k1
    // cells (each also covers its antipode in file layer k2).
    let tsets = [
        line_of(cube, LineFamily::TransversalSet, Cell::new(i2, j1, k1)),
        line_of(cube, LineFamily::TransversalSet, Cell::new(i1, j2, k1)),
        line_of(cube, LineFamily::TransversalSet, Cell::new(i2, j2, k1)),
    ];
    // (2c) The three symbol-sets pairing the non-anchor x1 cells and
    // (2d) the six symbol-sets pairing the x2 cells.
    let ssets = [
        line_of(cube, LineFamily::SymbolSetRow, Cell::new(i2, j2, k1)),
        line_of(cube, LineFamily::SymbolSetColumn, Cell::new(i2, j2, k1)),
        line_of(cube, LineFamily::SymbolSetFile, Cell::new(i1, j2, k2)),
        line_of(cube, LineFamily::SymbolSetRow, Cell::new(i1, j2, k1)),
        line_of(cube, LineFamily::SymbolSetColumn, Cell::new(i1, j2, k1)),
        line_of(cube, LineFamily::SymbolSetFile, Cell::new(i1, j2, k1)),
        line_of(cube, LineFamily::SymbolSetRow, Cell::new(i2, j1, k1)),
        line_of(cube, LineFamily::SymbolSetColumn, Cell::new(i2, j1, k1)),
        line_of(cube, LineFamily::SymbolSetFile, Cell::new(i1, j1, k2)),
    ];
    for id in tsets.into_iter().chain(ssets) {
        if ledger.line_overloaded(id) {
            return Err(Elimination::LineOverloaded(id));
        }
    }

    // (3) The seven non-anchor cells must be conflict-free and unused.
    let side_cells = [
        Cell::new(i2, j1, k1),
        Cell::new(i1, j2, k1),
        Cell::new(i1, j1, k2),
        Cell::new(i2, j2, k1),
        Cell::new(i2, j1, k2),
        Cell::new(i1, j2, k2),
        Cell::new(i2, j2, k2),
    ];
    for cell in side_cells {
        let flat = cell.flat(n);
        if is_conflict[flat] {
            return Err(Elimination::ConflictCell(cell));
        }
        if used[flat] {
            return Err(Elimination::UsedCell(cell));
        }
    }

    // The swap must clear the anchor and create no new conflict.
    let tc = ThreeCube::new((i1, i2), (j1, j2), (k1, k2)).expect("distinct pairs");
    for cell in tc.cells() {
        let post = cube.get_cell(cell) ^ x1 ^ x2;
        if a.contains(cell, post) {
            return Err(Elimination::NotAllowed);
        }
    }
    Ok(tc)
}

/// Swaps every plan 3-cube on a copy of the cube. Disjointness makes the
/// order irrelevant.
pub fn apply_plan(cube: &StructuredCube, plan: &SwapPlan) -> Result<LatinCube, Error> {
    let mut out = cube.cube().clone();
    for tc in plan.three_cubes() {
        swap(&mut out, tc)?;
    }
    Ok(out)
}

/// Re-derives every plan invariant from scratch: pairwise disjointness,
/// exact conflict coverage, allowed-ness against the pre-swap cube, and one
/// conflict (the anchor) per 3-cube.
pub fn verify_plan(
    cube: &StructuredCube,
    a: &ForbiddenCube,
    plan: &SwapPlan,
) -> Result<(), Error> {
    let n = cube.n();
    let fail = |detail: String| Err(Error::Invariant { detail });
    let mut owner: Vec<Option<usize>> = vec![None; n * n * n];
    for (idx, tc) in plan.three_cubes().iter().enumerate() {
        let (x1, x2) = three_cube_symbols(cube.cube(), tc).map_err(|_| Error::Invariant {
            detail: format!("plan member {tc} is not a 3-cube of the cube"),
        })?;
        for cell in tc.cells() {
            if let Some(prev) = owner[cell.flat(n)] {
                return fail(format!(
                    "3-cubes {} and {} share cell {cell}",
                    plan.three_cubes()[prev],
                    tc
                ));
            }
            owner[cell.flat(n)] = Some(idx);
            let post = cube.get_cell(cell) ^ (x1 as usize) ^ (x2 as usize);
            if a.contains(cell, post) {
                return fail(format!("plan member {tc} is not allowed at {cell}"));
            }
        }
    }
    let conflict_list = conflicts(cube.cube(), a).expect("orders match");
    let covered: BTreeMap<u32, usize> = plan
        .covered_conflicts()
        .map(|(c, i)| (c.flat(n) as u32, i))
        .collect();
    if covered.len() != conflict_list.len() || plan.len() != conflict_list.len() {
        return fail(format!(
            "plan covers {} conflicts with {} 3-cubes, instance has {}",
            covered.len(),
            plan.len(),
            conflict_list.len()
        ));
    }
    let mut anchors_seen = vec![false; plan.len()];
    for cell in &conflict_list {
        let flat = cell.flat(n) as u32;
        let Some(&idx) = covered.get(&flat) else {
            return fail(format!("conflict {cell} is not covered"));
        };
        if !plan.three_cubes()[idx].contains(*cell) {
            return fail(format!("conflict {cell} not inside its assigned 3-cube"));
        }
        if owner[cell.flat(n)] != Some(idx) {
            return fail(format!("conflict {cell} lies in a different plan 3-cube"));
        }
        if anchors_seen[idx] {
            return fail(format!("3-cube {idx} anchors two conflicts"));
        }
        anchors_seen[idx] = true;
    }
    Ok(())
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartRecord {
    pub restart: usize,
    pub seed: u64,
    pub score: f64,
    pub plan: PlanStatus,
    pub time_ms: u128,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanStatus {
    Ok,
    Stuck(Cell),
    NoPermutation,
}

impl fmt::Display for RestartRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "restart={} seed={} score={} plan=",
            self.restart, self.seed, self.score
        )?;
        match &self.plan {
            PlanStatus::Ok => write!(f, "ok")?,
            PlanStatus::Stuck(cell) => write!(f, "stuck:{cell}")?,
            PlanStatus::NoPermutation => write!(f, "stuck:permutation")?,
        }
        write!(f, " time_ms={}", self.time_ms)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunLog {
    pub records: Vec<RestartRecord>,
}

impl fmt::Display for RunLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for record in &self.records {
            writeln!(f, "{record}")?;
        }
        Ok(())
    }
}

/// A verified avoider along with everything the run produced.
#[derive(Debug, Clone)]
pub struct Solution {
    pub cube: LatinCube,
    pub base: StructuredCube,
    pub plan: SwapPlan,
    pub ledger: OverloadLedger,
    pub report: ConflictReport,
    pub log: RunLog,
    pub restarts_used: usize,
}

#[derive(Debug)]
pub enum SolveFailure {
    Invalid(Error),
    /// Every restart got stuck; possible for unavoidable or adversarial
    /// instances (the guarantee only applies under the inequalities).
    BudgetExhausted { log: RunLog },
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveFailure::Invalid(e) => write!(f, "invalid input: {e}"),
            SolveFailure::BudgetExhausted { log } => write!(
                f,
                "restart budget exhausted after {} attempts",
                log.records.len()
            ),
        }
    }
}

impl std::error::Error for SolveFailure {}

enum RestartOutcome {
    Solved(Box<Solution>),
    Failed(RestartRecord),
}

fn run_restart(
    t: u32,
    a: &ForbiddenCube,
    params: &SolverParams,
    restart: usize,
) -> Result<RestartOutcome, Error> {
    let start = Instant::now();
    let restart_seed = derive_seed(params.seed, 0x5EED_0000 + restart as u64);
    let mut restart_params = params.clone();
    restart_params.seed = restart_seed;
    let search = match find_permutation(t, a, &restart_params) {
        Ok(search) => search,
        Err(failure) => {
            return Ok(RestartOutcome::Failed(RestartRecord {
                restart,
                seed: restart_seed,
                score: failure.best_score,
                plan: PlanStatus::NoPermutation,
                time_ms: start.elapsed().as_millis(),
            }));
        }
    };
    match build_swap_plan(&search.cube, a, &restart_params) {
        Ok((plan, ledger)) => {
            verify_plan(&search.cube, a, &plan)?;
            if !ledger.matches_recount(&search.cube, &plan) {
                return Err(Error::Invariant {
                    detail: "ledger counters disagree with recount".into(),
                });
            }
            let cube = apply_plan(&search.cube, &plan)?;
            let validation = cube.validate();
            let leftover = conflicts(&cube, a)?;
            if !validation.is_ok() || !leftover.is_empty() {
                return Err(Error::Invariant {
                    detail: format!(
                        "applied plan left {} conflicts, validation {}",
                        leftover.len(),
                        validation
                    ),
                });
            }
            let record = RestartRecord {
                restart,
                seed: restart_seed,
                score: search.score,
                plan: PlanStatus::Ok,
                time_ms: start.elapsed().as_millis(),
            };
            Ok(RestartOutcome::Solved(Box::new(Solution {
                cube,
                base: search.cube,
                plan,
                ledger,
                report: search.report,
                log: RunLog {
                    records: vec![record],
                },
                restarts_used: restart + 1,
            })))
        }
        Err(failure) => Ok(RestartOutcome::Failed(RestartRecord {
            restart,
            seed: restart_seed,
            score: search.score,
            plan: PlanStatus::Stuck(failure.conflict),
            time_ms: start.elapsed().as_millis(),
        })),
    }
}

fn boolean_exponent(a: &ForbiddenCube) -> Result<u32, Error> {
    match a.order().exponent() {
        Some(t) if t >= 1 => Ok(t),
        _ => Err(Error::NotBooleanOrder { n: a.n() }),
    }
}

/// The full pipeline with restarts: permutation search, plan construction,
/// swaps, verification. Every returned cube has been re-validated and
/// re-checked for conflicts.
pub fn solve(a: &ForbiddenCube, params: &SolverParams) -> Result<Solution, SolveFailure> {
    solve_parallel(a, params, 1)
}

/// Like `solve`, running up to `workers` restarts concurrently in waves.
/// The lowest successful restart index wins, so the solution and the log
/// match the sequential run.
pub fn solve_parallel(
    a: &ForbiddenCube,
    params: &SolverParams,
    workers: usize,
) -> Result<Solution, SolveFailure> {
    let t = boolean_exponent(a).map_err(SolveFailure::Invalid)?;
    params
        .validate(a.n())
        .map_err(SolveFailure::Invalid)?;
    let workers = workers.max(1);
    let total = params.max_restarts.max(1);
    let mut log = RunLog::default();
    let mut next = 0usize;
    while next < total {
        let wave = (next..total.min(next + workers)).collect::<Vec<_>>();
        let mut outcomes: Vec<(usize, RestartOutcome)> = Vec::with_capacity(wave.len());
        if wave.len() == 1 {
            let r = wave[0];
            outcomes.push((r, run_restart(t, a, params, r).map_err(SolveFailure::Invalid)?));
        } else {
            let results: Vec<Result<RestartOutcome, Error>> = std::thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|&r| scope.spawn(move || run_restart(t, a, params, r)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("restart worker panicked"))
                    .collect()
            });
            for (&r, result) in wave.iter().zip(results) {
                outcomes.push((r, result.map_err(SolveFailure::Invalid)?));
            }
        }
        for (_, outcome) in outcomes {
            match outcome {
                RestartOutcome::Failed(record) => log.records.push(record),
                RestartOutcome::Solved(solution) => {
                    let mut solution = *solution;
                    log.records.extend(solution.log.records);
                    solution.log = log;
                    return Ok(solution);
                }
            }
        }
        next += wave.len();
    }
    Err(SolveFailure::BudgetExhausted { log })
}
