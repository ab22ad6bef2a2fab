//! Structural machinery on cubes isomorphic to the Boolean cube: 3-cubes and
//! swaps, the block and transversal-set partitions, symbol-sets, and checkers
//! for the structural properties P1..P10.
//!
//! Block and set membership is computed from XOR level sets of the pullback
//! coordinates; the property checkers below test the defining conditions
//! directly against cube entries instead of trusting those formulas.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::{permute_cube, Cell, LatinCube, PermutationQuadruple, StructuredCube};
use crate::error::Error;

/// Eight cells on a {i1,i2} x {j1,j2} x {k1,k2} grid carrying two symbols in
/// the alternating pattern. Stored canonically: each pair ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreeCube {
    i: [u16; 2],
    j: [u16; 2],
    k: [u16; 2],
}

impl ThreeCube {
    pub fn new(
        rows: (usize, usize),
        cols: (usize, usize),
        files: (usize, usize),
    ) -> Result<Self, Error> {
        if rows.0 == rows.1 || cols.0 == cols.1 || files.0 == files.1 {
            let j = if cols.0 == cols.1 { cols.0 } else { rows.0 };
            return Err(Error::DegenerateThreeCube { j });
        }
        let sort = |(a, b): (usize, usize)| {
            if a < b {
                [a as u16, b as u16]
            } else {
                [b as u16, a as u16]
            }
        };
        Ok(ThreeCube {
            i: sort(rows),
            j: sort(cols),
            k: sort(files),
        })
    }

    pub fn rows(&self) -> [usize; 2] {
        [self.i[0] as usize, self.i[1] as usize]
    }

    pub fn cols(&self) -> [usize; 2] {
        [self.j[0] as usize, self.j[1] as usize]
    }

    pub fn files(&self) -> [usize; 2] {
        [self.k[0] as usize, self.k[1] as usize]
    }

    /// The eight member cells, in lexicographic order.
    pub fn cells(&self) -> [Cell; 8] {
        let mut out = [Cell::new(0, 0, 0); 8];
        let mut idx = 0;
        for &i in &self.i {
            for &j in &self.j {
                for &k in &self.k {
                    out[idx] = Cell::new(i as usize, j as usize, k as usize);
                    idx += 1;
                }
            }
        }
        out
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.i.contains(&(cell.i as u16))
            && self.j.contains(&(cell.j as u16))
            && self.k.contains(&(cell.k as u16))
    }

    /// Given one member row index, the other one.
    pub fn other_row(&self, i: usize) -> usize {
        (self.i[0] as usize) ^ (self.i[1] as usize) ^ i
    }

    pub fn other_col(&self, j: usize) -> usize {
        (self.j[0] as usize) ^ (self.j[1] as usize) ^ j
    }

    pub fn other_file(&self, k: usize) -> usize {
        (self.k[0] as usize) ^ (self.k[1] as usize) ^ k
    }

    /// Canonical packed key for dedup sets (7 bits per coordinate).
    pub(crate) fn pack(&self) -> u64 {
        let mut v = 0u64;
        for x in [
            self.i[0], self.i[1], self.j[0], self.j[1], self.k[0], self.k[1],
        ] {
            v = (v << 7) | x as u64;
        }
        v
    }
}

impl fmt::Display for ThreeCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{},{}}}x{{{},{}}}x{{{},{}}}",
            self.i[0] + 1,
            self.i[1] + 1,
            self.j[0] + 1,
            self.j[1] + 1,
            self.k[0] + 1,
            self.k[1] + 1
        )
    }
}

/// The two symbols on a 3-cube in the ambient cube, checking the alternating
/// pattern. Returns (symbol at (i1,j1,k1), symbol at (i1,j2,k1)) for the
/// canonical coordinate order.
pub fn three_cube_symbols(cube: &LatinCube, tc: &ThreeCube) -> Result<(u16, u16), Error> {
    let [i1, i2] = tc.rows();
    let [j1, j2] = tc.cols();
    let [k1, k2] = tc.files();
    let x1 = cube.get(i1, j1, k1) as u16;
    let x2 = cube.get(i1, j2, k1) as u16;
    let want = [
        (i1, j1, k1, x1),
        (i2, j2, k1, x1),
        (i1, j2, k2, x1),
        (i2, j1, k2, x1),
        (i1, j2, k1, x2),
        (i2, j1, k1, x2),
        (i1, j1, k2, x2),
        (i2, j2, k2, x2),
    ];
    for (i, j, k, x) in want {
        if cube.get(i, j, k) != x as usize {
            return Err(Error::ThreeCubePattern { i, j, k });
        }
    }
    Ok((x1, x2))
}

/// The unique 3-cube of `cube` containing `cell` and `(cell.i, j2, cell.k)`.
///
/// The completing row layer carries the anchor's symbol in column (j2, k1);
/// the completing file layer carries the companion symbol in file (i1, j1).
/// Both come from the precomputed per-line symbol inverses.
pub fn three_cube_from_pair(
    cube: &StructuredCube,
    cell: Cell,
    j2: usize,
) -> Result<ThreeCube, Error> {
    let n = cube.n();
    if !cell.in_range(n) {
        return Err(Error::CellOutOfRange {
            i: cell.i,
            j: cell.j,
            k: cell.k,
            n,
        });
    }
    if j2 >= n {
        return Err(Error::BlockIndexOutOfRange { index: j2, n });
    }
    if j2 == cell.j {
        return Err(Error::DegenerateThreeCube { j: j2 });
    }
    let x1 = cube.get_cell(cell);
    let x2 = cube.get(cell.i, j2, cell.k);
    let i2 = cube.col_inverse(j2, cell.k, x1);
    let k2 = cube.file_inverse(cell.i, cell.j, x2);
    let tc = ThreeCube::new((cell.i, i2), (cell.j, j2), (cell.k, k2))?;
    debug_assert!(three_cube_symbols(cube.cube(), &tc).is_ok());
    Ok(tc)
}

/// All n-1 3-cubes containing `cell`, one per choice of the second column.
pub fn three_cubes_through(cube: &StructuredCube, cell: Cell) -> Vec<ThreeCube> {
    let n = cube.n();
    (0..n)
        .filter(|&j2| j2 != cell.j)
        .map(|j2| three_cube_from_pair(cube, cell, j2).expect("valid cell and j2"))
        .collect()
}

/// Exchanges the two symbols on a 3-cube in place. Errors if the entries do
/// not carry the alternating pattern (a caller logic error).
pub fn swap(cube: &mut LatinCube, tc: &ThreeCube) -> Result<(), Error> {
    let (x1, x2) = three_cube_symbols(cube, tc)?;
    for cell in tc.cells() {
        let cur = cube.get_cell(cell) as u16;
        cube.set(cell.i, cell.j, cell.k, cur ^ x1 ^ x2);
    }
    Ok(())
}

/// Size of the intersection of the two 8-cell sets. For 3-cubes of the same
/// Latin cube this is always 0, 1, or 8.
pub fn intersect(a: &ThreeCube, b: &ThreeCube) -> usize {
    let common = |x: [u16; 2], y: [u16; 2]| x.iter().filter(|v| y.contains(v)).count();
    common(a.i, b.i) * common(a.j, b.j) * common(a.k, b.k)
}

/// The ten block/layer families that partition the n^3 cells into n sets of
/// n^2 cells each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockFamily {
    RowLayer,
    ColumnLayer,
    FileLayer,
    RowBlock,
    ColumnBlock,
    FileBlock,
    SymbolBlock,
    SymbolRowBlock,
    SymbolColumnBlock,
    SymbolFileBlock,
}

pub const BLOCK_FAMILIES: [BlockFamily; 10] = [
    BlockFamily::RowLayer,
    BlockFamily::ColumnLayer,
    BlockFamily::FileLayer,
    BlockFamily::RowBlock,
    BlockFamily::ColumnBlock,
    BlockFamily::FileBlock,
    BlockFamily::SymbolBlock,
    BlockFamily::SymbolRowBlock,
    BlockFamily::SymbolColumnBlock,
    BlockFamily::SymbolFileBlock,
];

impl fmt::Display for BlockFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BlockFamily::RowLayer => "row-layer",
            BlockFamily::ColumnLayer => "column-layer",
            BlockFamily::FileLayer => "file-layer",
            BlockFamily::RowBlock => "row-block",
            BlockFamily::ColumnBlock => "column-block",
            BlockFamily::FileBlock => "file-block",
            BlockFamily::SymbolBlock => "symbol-block",
            BlockFamily::SymbolRowBlock => "symbol-row-block",
            BlockFamily::SymbolColumnBlock => "symbol-column-block",
            BlockFamily::SymbolFileBlock => "symbol-file-block",
        };
        f.write_str(name)
    }
}

/// One block: a family plus an index in [0, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId {
    pub family: BlockFamily,
    pub index: usize,
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.family, self.index + 1)
    }
}

/// The block of `family` containing `cell`; O(1) from the pullbacks.
pub fn block_of(cube: &StructuredCube, family: BlockFamily, cell: Cell) -> BlockId {
    let index = match family {
        BlockFamily::RowLayer => cell.i,
        BlockFamily::ColumnLayer => cell.j,
        BlockFamily::FileLayer => cell.k,
        // A row block is n rows with identical content; rows (i,k) and
        // (i',k') agree exactly when their pullbacks XOR alike. The symbol-*
        // blocks share the same level sets with the grouping transposed.
        BlockFamily::RowBlock | BlockFamily::SymbolColumnBlock => cube.p1(cell.i) ^ cube.p3(cell.k),
        BlockFamily::ColumnBlock | BlockFamily::SymbolRowBlock => cube.p2(cell.j) ^ cube.p3(cell.k),
        BlockFamily::FileBlock | BlockFamily::SymbolFileBlock => cube.p1(cell.i) ^ cube.p2(cell.j),
        // Block c holds the cells carrying symbol tau4(c); the pullback of
        // the cell's own symbol is that c (and equals p1 ^ p2 ^ p3).
        BlockFamily::SymbolBlock => cube.p4(cube.get_cell(cell)),
    };
    BlockId { family, index }
}

/// All n^2 cells of a block.
pub fn block_members(cube: &StructuredCube, id: BlockId) -> Result<Vec<Cell>, Error> {
    let n = cube.n();
    if id.index >= n {
        return Err(Error::BlockIndexOutOfRange { index: id.index, n });
    }
    let mut out = Vec::with_capacity(n * n);
    for idx in 0..n * n * n {
        let cell = Cell::from_flat(idx, n);
        if block_of(cube, id.family, cell).index == id.index {
            out.push(cell);
        }
    }
    Ok(out)
}

/// The seven line/set families of size n used by the overload bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineFamily {
    Row,
    Column,
    File,
    TransversalSet,
    SymbolSetRow,
    SymbolSetColumn,
    SymbolSetFile,
}

pub const LINE_FAMILIES: [LineFamily; 7] = [
    LineFamily::Row,
    LineFamily::Column,
    LineFamily::File,
    LineFamily::TransversalSet,
    LineFamily::SymbolSetRow,
    LineFamily::SymbolSetColumn,
    LineFamily::SymbolSetFile,
];

impl fmt::Display for LineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LineFamily::Row => "row",
            LineFamily::Column => "column",
            LineFamily::File => "file",
            LineFamily::TransversalSet => "transversal-set",
            LineFamily::SymbolSetRow => "symbol-set(row)",
            LineFamily::SymbolSetColumn => "symbol-set(column)",
            LineFamily::SymbolSetFile => "symbol-set(file)",
        };
        f.write_str(name)
    }
}

/// One n-cell line or set, identified by a family and an index pair:
/// Row (i,k), Column (j,k), File (i,j), TransversalSet (c,d),
/// SymbolSet* (layer, block).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineId {
    pub family: LineFamily,
    pub a: usize,
    pub b: usize,
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{})", self.family, self.a + 1, self.b + 1)
    }
}

/// The line/set of `family` containing `cell`; O(1).
pub fn line_of(cube: &StructuredCube, family: LineFamily, cell: Cell) -> LineId {
    let (a, b) = match family {
        LineFamily::Row => (cell.i, cell.k),
        LineFamily::Column => (cell.j, cell.k),
        LineFamily::File => (cell.i, cell.j),
        LineFamily::TransversalSet => (
            cube.p1(cell.i) ^ cube.p3(cell.k),
            cube.p2(cell.j) ^ cube.p3(cell.k),
        ),
        LineFamily::SymbolSetRow => (cell.i, cube.p2(cell.j) ^ cube.p3(cell.k)),
        LineFamily::SymbolSetColumn => (cell.j, cube.p1(cell.i) ^ cube.p3(cell.k)),
        LineFamily::SymbolSetFile => (cell.k, cube.p1(cell.i) ^ cube.p2(cell.j)),
    };
    LineId { family, a, b }
}

/// The n cells of a line or set.
pub fn line_members(cube: &StructuredCube, id: LineId) -> Result<Vec<Cell>, Error> {
    let n = cube.n();
    if id.a >= n || id.b >= n {
        return Err(Error::BlockIndexOutOfRange {
            index: id.a.max(id.b),
            n,
        });
    }
    let q = cube.quadruple();
    let cells = match id.family {
        LineFamily::Row => (0..n).map(|j| Cell::new(id.a, j, id.b)).collect(),
        LineFamily::Column => (0..n).map(|i| Cell::new(i, id.a, id.b)).collect(),
        LineFamily::File => (0..n).map(|k| Cell::new(id.a, id.b, k)).collect(),
        LineFamily::TransversalSet => (0..n)
            .map(|k| {
                let i = q.row_layers.apply(id.a ^ cube.p3(k));
                let j = q.column_layers.apply(id.b ^ cube.p3(k));
                Cell::new(i, j, k)
            })
            .collect(),
        LineFamily::SymbolSetRow => (0..n)
            .map(|k| Cell::new(id.a, q.column_layers.apply(id.b ^ cube.p3(k)), k))
            .collect(),
        LineFamily::SymbolSetColumn => (0..n)
            .map(|k| Cell::new(q.row_layers.apply(id.b ^ cube.p3(k)), id.a, k))
            .collect(),
        LineFamily::SymbolSetFile => (0..n)
            .map(|j| Cell::new(q.row_layers.apply(id.b ^ cube.p2(j)), j, id.a))
            .collect(),
    };
    Ok(cells)
}

/// The n cells with row-block level `c` and column-block level `d`; satisfies
/// the three transversal-set conditions (distinct lines, distinct symbols,
/// pairwise common 3-cube).
pub fn transversal_set(cube: &StructuredCube, c: usize, d: usize) -> Result<Vec<Cell>, Error> {
    line_members(
        cube,
        LineId {
            family: LineFamily::TransversalSet,
            a: c,
            b: d,
        },
    )
}

/// Axis selecting which symbol-*-block family a symbol-set comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolSetAxis {
    Row,
    Column,
    File,
}

/// The n monochromatic cells where a symbol-*-block meets the matching layer.
pub fn symbol_set(
    cube: &StructuredCube,
    axis: SymbolSetAxis,
    layer: usize,
    block: usize,
) -> Result<Vec<Cell>, Error> {
    let family = match axis {
        SymbolSetAxis::Row => LineFamily::SymbolSetRow,
        SymbolSetAxis::Column => LineFamily::SymbolSetColumn,
        SymbolSetAxis::File => LineFamily::SymbolSetFile,
    };
    line_members(
        cube,
        LineId {
            family,
            a: layer,
            b: block,
        },
    )
}

/// Four cells of a layer square carrying two symbols in the crossed pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourCycle {
    pub rows: [usize; 2],
    pub cols: [usize; 2],
}

impl FourCycle {
    fn new(r1: usize, r2: usize, c1: usize, c2: usize) -> Self {
        FourCycle {
            rows: [r1.min(r2), r1.max(r2)],
            cols: [c1.min(c2), c1.max(c2)],
        }
    }
}

/// Extracts a layer as an n x n square, row-major. RowLayer i gives (j,k)
/// squares, ColumnLayer j gives (i,k), FileLayer k gives (i,j).
pub fn layer_square(cube: &LatinCube, family: BlockFamily, index: usize) -> Result<Vec<u16>, Error> {
    let n = cube.n();
    if index >= n {
        return Err(Error::BlockIndexOutOfRange { index, n });
    }
    let mut sq = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            let v = match family {
                BlockFamily::RowLayer => cube.get(index, a, b),
                BlockFamily::ColumnLayer => cube.get(a, index, b),
                BlockFamily::FileLayer => cube.get(a, b, index),
                _ => {
                    return Err(Error::InvalidParams {
                        reason: "layer_square expects a layer family".into(),
                    })
                }
            };
            sq[a * n + b] = v as u16;
        }
    }
    Ok(sq)
}

/// All 4-cycles through (r, c) in a square, one candidate per second column.
pub fn four_cycles_through(square: &[u16], n: usize, r: usize, c: usize) -> Vec<FourCycle> {
    let mut out = Vec::new();
    let x = square[r * n + c];
    for c2 in 0..n {
        if c2 == c {
            continue;
        }
        let y = square[r * n + c2];
        // The completing row carries x in column c2.
        for r2 in 0..n {
            if r2 != r && square[r2 * n + c2] == x && square[r2 * n + c] == y {
                out.push(FourCycle::new(r, r2, c, c2));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All 4-cycles of a square, canonical form, sorted.
pub fn enumerate_four_cycles(square: &[u16], n: usize) -> Vec<FourCycle> {
    let mut out = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                for c2 in c1 + 1..n {
                    if square[r1 * n + c1] == square[r2 * n + c2]
                        && square[r1 * n + c2] == square[r2 * n + c1]
                    {
                        out.push(FourCycle::new(r1, r2, c1, c2));
                    }
                }
            }
        }
    }
    out
}

/// Brute-force enumeration of every 3-cube of a cube, by testing the symbol
/// pattern over all coordinate pair triples. Independent of the per-cell
/// completion path; O(n^6).
pub fn enumerate_three_cubes(cube: &LatinCube) -> Vec<ThreeCube> {
    let n = cube.n();
    let mut out = Vec::new();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            for j1 in 0..n {
                for j2 in j1 + 1..n {
                    for k1 in 0..n {
                        for k2 in k1 + 1..n {
                            let tc = ThreeCube {
                                i: [i1 as u16, i2 as u16],
                                j: [j1 as u16, j2 as u16],
                                k: [k1 as u16, k2 as u16],
                            };
                            if three_cube_symbols(cube, &tc).is_ok() {
                                out.push(tc);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Structural properties of Boolean-isomorphic cubes (P1..P3 on layer
/// squares, P4..P8 on the cube, P9..P10 randomized closure checks).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
}

impl PropertyId {
    pub fn all() -> [PropertyId; 10] {
        use PropertyId::*;
        [P1, P2, P3, P4, P5, P6, P7, P8, P9, P10]
    }

    fn number(&self) -> u8 {
        use PropertyId::*;
        match self {
            P1 => 1,
            P2 => 2,
            P3 => 3,
            P4 => 4,
            P5 => 5,
            P6 => 6,
            P7 => 7,
            P8 => 8,
            P9 => 9,
            P10 => 10,
        }
    }

    /// Largest order for which the exhaustive mode is feasible.
    fn exhaustive_cap(&self) -> usize {
        use PropertyId::*;
        match self {
            P1 | P2 => 16,
            P3 => 8,
            P4 => 32,
            P5 => 16,
            P6 => 16,
            P7 => 16,
            P8 => 32,
            P9 | P10 => 128,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    /// Random instances instead of full enumeration (needed above the
    /// per-property exhaustive cap).
    Sampled { samples: usize },
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub id: PropertyId,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub cases_checked: u64,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "{} pass", self.id)
        } else {
            write!(
                f,
                "{} fail [{}]",
                self.id,
                self.counterexample.as_deref().unwrap_or("no detail")
            )
        }
    }
}

struct PropertyRun {
    pass: bool,
    counterexample: Option<String>,
    cases: u64,
}

impl PropertyRun {
    fn new() -> Self {
        PropertyRun {
            pass: true,
            counterexample: None,
            cases: 0,
        }
    }

    /// Returns false once a counterexample is recorded, to stop the scan.
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok {
            self.pass = false;
            self.counterexample = Some(detail());
        }
        self.pass
    }
}

/// Checks one structural property, exhaustively or on sampled instances.
/// The seed drives instance sampling (and the quadruples of P9/P10).
pub fn check_property(
    cube: &StructuredCube,
    id: PropertyId,
    mode: CheckMode,
    seed: u64,
) -> Result<PropertyReport, Error> {
    let n = cube.n();
    if matches!(mode, CheckMode::Exhaustive) && n > id.exhaustive_cap() {
        return Err(Error::OrderTooLargeForExhaustive {
            n,
            cap: id.exhaustive_cap(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = PropertyRun::new();
    match id {
        PropertyId::P1 => check_p1(cube, mode, &mut rng, &mut run)?,
        PropertyId::P2 => check_p2(cube, mode, &mut rng, &mut run)?,
        PropertyId::P3 => check_p3(cube, &mut run)?,
        PropertyId::P4 => check_p4(cube, mode, &mut rng, &mut run),
        PropertyId::P5 => check_p5(cube, mode, &mut rng, &mut run),
        PropertyId::P6 => check_p6(cube, &mut run),
        PropertyId::P7 => check_p7(cube, mode, &mut rng, &mut run),
        PropertyId::P8 => check_p8(cube, &mut run),
        PropertyId::P9 => check_p9(cube, mode, &mut rng, &mut run),
        PropertyId::P10 => check_p10(cube, mode, &mut rng, &mut run)?,
    }
    Ok(PropertyReport {
        id,
        pass: run.pass,
        counterexample: run.counterexample,
        cases_checked: run.cases,
    })
}

fn layer_families() -> [BlockFamily; 3] {
    [
        BlockFamily::RowLayer,
        BlockFamily::ColumnLayer,
        BlockFamily::FileLayer,
    ]
}

/// P1: every cell of every layer square lies in exactly n-1 4-cycles.
fn check_p1(
    cube: &StructuredCube,
    mode: CheckMode,
    rng: &mut ChaCha8Rng,
    run: &mut PropertyRun,
) -> Result<(), Error> {
    let n = cube.n();
    let mut visit = |family: BlockFamily, layer: usize, r: usize, c: usize| -> bool {
        let sq = layer_square(cube.cube(), family, layer).expect("layer in range");
        let cycles = four_cycles_through(&sq, n, r, c);
        run.check(cycles.len() == n - 1, || {
            format!(
                "{family} {} cell ({},{}): {} 4-cycles, expected {}",
                layer + 1,
                r + 1,
                c + 1,
                cycles.len(),
                n - 1
            )
        })
    };
    match mode {
        CheckMode::Exhaustive => {
            for family in layer_families() {
                for layer in 0..n {
                    for r in 0..n {
                        for c in 0..n {
                            if !visit(family, layer, r, c) {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        CheckMode::Sampled { samples } => {
            for _ in 0..samples {
                let family = layer_families()[rng.random_range(0..3)];
                let layer = rng.random_range(0..n);
                let r = rng.random_range(0..n);
                let c = rng.random_range(0..n);
                if !visit(family, layer, r, c) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// P2: two cells of a common row determine a unique completing 4-cycle.
fn check_p2(
    cube: &StructuredCube,
    mode: CheckMode,
    rng: &mut ChaCha8Rng,
    run: &mut PropertyRun,
) -> Result<(), Error> {
    let n = cube.n();
    let mut visit = |family: BlockFamily, layer: usize, r: usize, c1: usize, c2: usize| -> bool {
        let sq = layer_square(cube.cube(), family, layer).expect("layer in range");
        let completions = (0..n)
            .filter(|&r2| {
                r2 != r && sq[r2 * n + c2] == sq[r * n + c1] && sq[r2 * n + c1] == sq[r * n + c2]
            })
            .count();
        run.check(completions == 1, || {
            format!(
                "{family} {} cells ({},{}),({},{}): {} completions",
                layer + 1,
                r + 1,
                c1 + 1,
                r + 1,
                c2 + 1,
                completions
            )
        })
    };
    match mode {
        CheckMode::Exhaustive => {
            for family in layer_families() {
                for layer in 0..n {
                    for r in 0..n {
                        for c1 in 0..n {
                            for c2 in c1 + 1..n {
                                if !visit(family, layer, r, c1, c2) {
                                    return Ok(());
                                }
                            }
                        }
                    }
                }
            }
        }
        CheckMode::Sampled { samples } => {
            for _ in 0..samples {
                let family = layer_families()[rng.random_range(0..3)];
                let layer = rng.random_range(0..n);
                let r = rng.random_range(0..n);
                let c1 = rng.random_range(0..n);
                let mut c2 = rng.random_range(0..n - 1);
                if c2 >= c1 {
                    c2 += 1;
                }
                if !visit(family, layer, r, c1, c2) {
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}

/// P3: two 4-cycles of a layer square intersect in 0, 1 or 4 cells.
fn check_p3(cube: &StructuredCube, run: &mut PropertyRun) -> Result<(), Error> {
    let n = cube.n();
    for family in layer_families() {
        for layer in 0..n {
            let sq = layer_square(cube.cube(), family, layer)?;
            let cycles = enumerate_four_cycles(&sq, n);
            for (idx, a) in cycles.iter().enumerate() {
                for b in &cycles[idx + 1..] {
                    let rows = a.rows.iter().filter(|v| b.rows.contains(v)).count();
                    let cols = a.cols.iter().filter(|v| b.cols.contains(v)).count();
                    let size = rows * cols;
                    if !run.check(matches!(size, 0 | 1 | 4), || {
                        format!("{family} {}: 4-cycles intersect in {size} cells", layer + 1)
                    }) {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

/// P4: every cell belongs to exactly n-1 pairwise distinct 3-cubes.
fn check_p4(cube: &StructuredCube, mode: CheckMode, rng: &mut ChaCha8Rng, run: &mut PropertyRun) {
    let n = cube.n();
    let mut visit = |cell: Cell| -> bool {
        let mut tcs = three_cubes_through(cube, cell);
        let total = tcs.len();
        tcs.sort_unstable();
        tcs.dedup();
        let ok = total == n - 1 && tcs.len() == n - 1 && tcs.iter().all(|tc| tc.contains(cell));
        run.check(ok, || {
            format!("cell {cell}: {total} 3-cubes ({} distinct), expected {}", tcs.len(), n - 1)
        })
    };
    match mode {
        CheckMode::Exhaustive => {
            for idx in 0..n * n * n {
                if !visit(Cell::from_flat(idx, n)) {
                    return;
                }
            }
        }
        CheckMode::Sampled { samples } => {
            for _ in 0..samples {
                let idx = rng.random_range(0..n * n * n);
                if !visit(Cell::from_flat(idx, n)) {
                    return;
                }
            }
        }
    }
}

/// P5: if c1,c2 and c1,c3 are coordinate-disjoint pairs sharing 3-cubes with
/// c1, and c2,c3 are coordinate-disjoint, then c2,c3 also share a 3-cube.
fn check_p5(cube: &StructuredCube, mode: CheckMode, rng: &mut ChaCha8Rng, run: &mut PropertyRun) {
    let n = cube.n();
    let antipode = |tc: &ThreeCube, cell: Cell| {
        Cell::new(
            tc.other_row(cell.i),
            tc.other_col(cell.j),
            tc.other_file(cell.k),
        )
    };
    let disjoint =
        |a: Cell, b: Cell| a.i != b.i && a.j != b.j && a.k != b.k;
    let mut visit = |c1: Cell| -> bool {
        let tcs = three_cubes_through(cube, c1);
        for t1 in &tcs {
            let c2 = antipode(t1, c1);
            for t2 in &tcs {
                let c3 = antipode(t2, c1);
                if !disjoint(c2, c3) {
                    continue;
                }
                // c2 and c3 must share a 3-cube; complete from c2 toward c3's column.
                let shared = three_cube_from_pair(cube, c2, c3.j)
                    .map(|tc| tc.contains(c3))
                    .unwrap_or(false);
                if !run.check(shared, || {
                    format!("cells {c1}, {c2}, {c3}: no common 3-cube for the last pair")
                }) {
                    return false;
                }
            }
        }
        true
    };
    match mode {
        CheckMode::Exhaustive => {
            for idx in 0..n * n * n {
                if !visit(Cell::from_flat(idx, n)) {
                    return;
                }
            }
        }
        CheckMode::Sampled { samples } => {
            for _ in 0..samples {
                let idx = rng.random_range(0..n * n * n);
                if !visit(Cell::from_flat(idx, n)) {
                    return;
                }
            }
        }
    }
}

/// P6: 3-cube pairwise intersections only ever have 0, 1 or 8 cells.
fn check_p6(cube: &StructuredCube, run: &mut PropertyRun) {
    let all = enumerate_three_cubes(cube.cube());
    for (idx, a) in all.iter().enumerate() {
        for b in &all[idx + 1..] {
            let size = intersect(a, b);
            if !run.check(matches!(size, 0 | 1 | 8), || {
                format!("3-cubes {a} and {b} intersect in {size} cells")
            }) {
                return;
            }
        }
    }
}

/// P7: for a column (j1,k1) and any k2 there is exactly one j2 with the same
/// symbol sequence along the column.
fn check_p7(cube: &StructuredCube, mode: CheckMode, rng: &mut ChaCha8Rng, run: &mut PropertyRun) {
    let n = cube.n();
    let mut visit = |j1: usize, k1: usize, k2: usize| -> bool {
        let matches = (0..n)
            .filter(|&j2| (0..n).all(|x| cube.get(x, j1, k1) == cube.get(x, j2, k2)))
            .count();
        run.check(matches == 1, || {
            format!(
                "column (j={},k={}) vs file layer {}: {} matching columns",
                j1 + 1,
                k1 + 1,
                k2 + 1,
                matches
            )
        })
    };
    match mode {
        CheckMode::Exhaustive => {
            for j1 in 0..n {
                for k1 in 0..n {
                    for k2 in 0..n {
                        if !visit(j1, k1, k2) {
                            return;
                        }
                    }
                }
            }
        }
        CheckMode::Sampled { samples } => {
            for _ in 0..samples {
                if !visit(
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                ) {
                    return;
                }
            }
        }
    }
}

/// P8: for each axis and symbol, transporting the symbol's cells of the first
/// layer across layers stays monochromatic.
fn check_p8(cube: &StructuredCube, run: &mut PropertyRun) {
    let n = cube.n();
    // Row-layer statement: cells of row layer 0 holding b, carried to row
    // layer i by (j,k), all hold one symbol. Column/file layers analogous.
    for b in 0..n {
        for i in 0..n {
            let mut seen: Option<usize> = None;
            let mut ok = true;
            for j in 0..n {
                for k in 0..n {
                    if cube.get(0, j, k) == b {
                        let s = cube.get(i, j, k);
                        ok &= *seen.get_or_insert(s) == s;
                    }
                }
            }
            if !run.check(ok, || {
                format!("row layers: symbol {} transported to layer {} is not monochromatic", b + 1, i + 1)
            }) {
                return;
            }
        }
        for j in 0..n {
            let mut seen: Option<usize> = None;
            let mut ok = true;
            for i in 0..n {
                for k in 0..n {
                    if cube.get(i, 0, k) == b {
                        let s = cube.get(i, j, k);
                        ok &= *seen.get_or_insert(s) == s;
                    }
                }
            }
            if !run.check(ok, || {
                format!("column layers: symbol {} transported to layer {} is not monochromatic", b + 1, j + 1)
            }) {
                return;
            }
        }
        for k in 0..n {
            let mut seen: Option<usize> = None;
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    if cube.get(i, j, 0) == b {
                        let s = cube.get(i, j, k);
                        ok &= *seen.get_or_insert(s) == s;
                    }
                }
            }
            if !run.check(ok, || {
                format!("file layers: symbol {} transported to layer {} is not monochromatic", b + 1, k + 1)
            }) {
                return;
            }
        }
    }
}

/// P9: permuting layers/symbols of the cube yields a Latin cube.
fn check_p9(cube: &StructuredCube, mode: CheckMode, rng: &mut ChaCha8Rng, run: &mut PropertyRun) {
    let n = cube.n();
    let samples = match mode {
        CheckMode::Exhaustive => 100,
        CheckMode::Sampled { samples } => samples,
    };
    for _ in 0..samples {
        let q = PermutationQuadruple::random(n, rng);
        let permuted = permute_cube(cube.cube(), &q).expect("size-matched quadruple");
        if !run.check(permuted.validate().is_ok(), || {
            "permuted cube failed Latin validation".to_string()
        }) {
            return;
        }
    }
}

/// P10: cubes isomorphic to the Boolean cube keep the n-1 3-cube count and
/// properties P5, P7 and P8.
fn check_p10(
    cube: &StructuredCube,
    mode: CheckMode,
    rng: &mut ChaCha8Rng,
    run: &mut PropertyRun,
) -> Result<(), Error> {
    let n = cube.n();
    let (quadruples, spots) = match mode {
        CheckMode::Exhaustive => (10, 32),
        CheckMode::Sampled { samples } => (samples.max(1), 32),
    };
    for _ in 0..quadruples {
        let extra = PermutationQuadruple::random(n, rng);
        let composed = extra.compose(cube.quadruple());
        let iso = StructuredCube::new(cube.base_t(), composed)?;
        let mut inner = PropertyRun::new();
        check_p4(&iso, CheckMode::Sampled { samples: spots }, rng, &mut inner);
        if inner.pass {
            check_p5(&iso, CheckMode::Sampled { samples: spots }, rng, &mut inner);
        }
        if inner.pass {
            check_p7(&iso, CheckMode::Sampled { samples: spots }, rng, &mut inner);
        }
        if inner.pass {
            check_p8(&iso, &mut inner);
        }
        run.cases += inner.cases;
        if !inner.pass {
            run.pass = false;
            run.counterexample = inner
                .counterexample
                .map(|c| format!("isomorphic copy: {c}"));
            return Ok(());
        }
    }
    Ok(())
}
