//! Latin cube representation: the Boolean cube over `Z_2^t`, permutations of
//! its layers and symbols, validation, and the `latin-cube v1` text format.
//!
//! Indexing is 0-based everywhere in memory and 1-based in text formats and
//! display output. Coordinates, layers and symbols all live in `[0, n)`; the
//! binary encoding of an index is its own `t`-bit vector, so the Boolean cube
//! entry is a single XOR.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;

/// Largest exponent for dense Boolean-structured cubes (n = 2^t <= 128).
pub const MAX_T: u32 = 7;
/// Largest order accepted anywhere (dense buffers stay below ~4 MiB).
pub const MAX_N: usize = 128;

/// Cube order, remembering the exponent when the order is a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Order {
    n: usize,
    t: Option<u32>,
}

impl Order {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidOrder { n, max: MAX_N });
        }
        let t = n.is_power_of_two().then(|| n.trailing_zeros());
        Ok(Order { n, t })
    }

    /// Order 2^t for the Boolean-structured paths.
    pub fn pow2(t: u32) -> Result<Self, Error> {
        if t == 0 || t > MAX_T {
            return Err(Error::ExponentOutOfRange { t, max: MAX_T });
        }
        Ok(Order {
            n: 1 << t,
            t: Some(t),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Some(t)` iff `n = 2^t`.
    pub fn exponent(&self) -> Option<u32> {
        self.t
    }
}

/// A cell position; all three coordinates in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Cell {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Cell { i, j, k }
    }

    /// Row-major flat index (i, then j, then k).
    pub fn flat(&self, n: usize) -> usize {
        (self.i * n + self.j) * n + self.k
    }

    pub fn from_flat(idx: usize, n: usize) -> Self {
        Cell {
            i: idx / (n * n),
            j: (idx / n) % n,
            k: idx % n,
        }
    }

    pub fn in_range(&self, n: usize) -> bool {
        self.i < n && self.j < n && self.k < n
    }
}

impl fmt::Display for Cell {
    /// 1-based, matching file formats and CLI output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i + 1, self.j + 1, self.k + 1)
    }
}

/// Which of the three line directions a line runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineKind {
    /// Varies j; fixed (i, k).
    Row,
    /// Varies i; fixed (j, k).
    Column,
    /// Varies k; fixed (i, j).
    File,
}

/// A line that fails the Latin condition, named by its two fixed coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineViolation {
    pub kind: LineKind,
    /// Fixed coordinates: Row (i, k), Column (j, k), File (i, j).
    pub a: usize,
    pub b: usize,
}

impl fmt::Display for LineViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LineKind::Row => write!(f, "row (i={},k={})", self.a + 1, self.b + 1),
            LineKind::Column => write!(f, "column (j={},k={})", self.a + 1, self.b + 1),
            LineKind::File => write!(f, "file (i={},j={})", self.a + 1, self.b + 1),
        }
    }
}

/// Result of checking all 3n^2 lines of a cube.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    violations: Vec<LineViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[LineViolation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            write!(f, "{} violated lines:", self.violations.len())?;
            for v in &self.violations {
                write!(f, " {v}")?;
            }
            Ok(())
        }
    }
}

/// An order-n cube of symbols; Latin when every line is a permutation.
///
/// Construction does not enforce the Latin property (parsed cubes may be
/// anything); `validate` reports it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinCube {
    order: Order,
    entries: Vec<u16>,
}

impl LatinCube {
    /// The Boolean Latin cube of order 2^t: entry at (i,j,k) is `i ^ j ^ k`.
    pub fn boolean(t: u32) -> Result<Self, Error> {
        let order = Order::pow2(t)?;
        let n = order.n();
        let mut entries = vec![0u16; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let ij = i ^ j;
                let base = (i * n + j) * n;
                for k in 0..n {
                    entries[base + k] = (ij ^ k) as u16;
                }
            }
        }
        Ok(LatinCube { order, entries })
    }

    /// Wraps a dense entry buffer in row-major (i, j, k) order.
    /// Checks length and symbol range, not the Latin property.
    pub fn from_entries(n: usize, entries: Vec<u16>) -> Result<Self, Error> {
        let order = Order::new(n)?;
        if entries.len() != n * n * n {
            return Err(Error::EntryCountMismatch {
                expected: n * n * n,
                got: entries.len(),
            });
        }
        if let Some(&s) = entries.iter().find(|&&s| s as usize >= n) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                n,
            });
        }
        Ok(LatinCube { order, entries })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.order.n();
        self.entries[(i * n + j) * n + k] as usize
    }

    #[inline]
    pub fn get_cell(&self, cell: Cell) -> usize {
        self.get(cell.i, cell.j, cell.k)
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, k: usize, symbol: u16) {
        let n = self.order.n();
        self.entries[(i * n + j) * n + k] = symbol;
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    /// Checks that every row, column and file contains each symbol exactly
    /// once, naming each violating line.
    pub fn validate(&self) -> ValidationReport {
        let n = self.order.n();
        let mut violations = Vec::new();
        let mut seen = vec![false; n];
        let check = |cells: &mut dyn Iterator<Item = usize>,
                         seen: &mut Vec<bool>,
                         entries: &Vec<u16>|
         -> bool {
            seen.iter_mut().for_each(|s| *s = false);
            for idx in cells {
                let s = entries[idx] as usize;
                if seen[s] {
                    return false;
                }
                seen[s] = true;
            }
            true
        };
        for i in 0..n {
            for k in 0..n {
                let mut it = (0..n).map(|j| (i * n + j) * n + k);
                if !check(&mut it, &mut seen, &self.entries) {
                    violations.push(LineViolation {
                        kind: LineKind::Row,
                        a: i,
                        b: k,
                    });
                }
            }
        }
        for j in 0..n {
            for k in 0..n {
                let mut it = (0..n).map(|i| (i * n + j) * n + k);
                if !check(&mut it, &mut seen, &self.entries) {
                    violations.push(LineViolation {
                        kind: LineKind::Column,
                        a: j,
                        b: k,
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut it = (0..n).map(|k| (i * n + j) * n + k);
                if !check(&mut it, &mut seen, &self.entries) {
                    violations.push(LineViolation {
                        kind: LineKind::File,
                        a: i,
                        b: j,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Serializes to the `latin-cube v1` text format (1-based symbols).
    pub fn to_text(&self) -> String {
        let n = self.order.n();
        let mut out = String::with_capacity(n * n * n * 4 + 32);
        out.push_str("latin-cube v1\n");
        out.push_str(&format!("n={n}\n"));
        for k in 0..n {
            out.push_str(&format!("layer k={}\n", k + 1));
            for i in 0..n {
                for j in 0..n {
                    if j > 0 {
                        out.push(' ');
                    }
                    out.push_str(&(self.get(i, j, k) + 1).to_string());
                }
                out.push('\n');
            }
        }
        out
    }

    /// Parses the `latin-cube v1` text format. Strict: exact headers, single
    /// spaces, trailing newline. Does not check the Latin property.
    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = StrictLines::new(text)?;
        let header = lines.next("header")?;
        if header != "latin-cube v1" {
            return Err(lines.err("expected header `latin-cube v1`"));
        }
        let order_line = lines.next("order line")?;
        let n: usize = order_line
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| lines.err("expected `n=<N>`"))?;
        if n == 0 || n > MAX_N {
            return Err(lines.err(&format!("order {n} out of range (1..={MAX_N})")));
        }
        let mut entries = vec![0u16; n * n * n];
        for k in 0..n {
            let layer = lines.next("layer header")?;
            let expected = format!("layer k={}", k + 1);
            if layer != expected {
                return Err(lines.err(&format!("expected `{expected}`")));
            }
            for i in 0..n {
                let row = lines.next("symbol row")?;
                let mut count = 0;
                for part in row.split(' ') {
                    if count == n {
                        return Err(lines.err(&format!("row length mismatch: expected {n} symbols")));
                    }
                    let s: usize = part
                        .parse()
                        .map_err(|_| lines.err(&format!("invalid symbol `{part}`")))?;
                    if s == 0 || s > n {
                        return Err(lines.err(&format!("symbol {s} out of range 1..={n}")));
                    }
                    entries[(i * n + count) * n + k] = (s - 1) as u16;
                    count += 1;
                }
                if count != n {
                    return Err(lines.err(&format!("row length mismatch: expected {n} symbols")));
                }
            }
        }
        lines.finish()?;
        LatinCube::from_entries(n, entries)
    }
}

/// Line-by-line reader enforcing the exact format: `\n` separators, required
/// trailing newline, no stray blank lines. Shared by both text formats.
pub(crate) struct StrictLines<'a> {
    rest: &'a str,
    line_no: usize,
}

impl<'a> StrictLines<'a> {
    pub(crate) fn new(text: &'a str) -> Result<Self, Error> {
        if !text.ends_with('\n') {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                reason: "missing trailing newline".into(),
            });
        }
        Ok(StrictLines { rest: text, line_no: 0 })
    }

    pub(crate) fn next(&mut self, what: &str) -> Result<&'a str, Error> {
        match self.rest.split_once('\n') {
            Some((line, rest)) => {
                self.rest = rest;
                self.line_no += 1;
                Ok(line)
            }
            None => Err(Error::Parse {
                line: self.line_no + 1,
                reason: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    pub(crate) fn try_next(&mut self) -> Option<&'a str> {
        match self.rest.split_once('\n') {
            Some((line, rest)) => {
                self.rest = rest;
                self.line_no += 1;
                Some(line)
            }
            None => None,
        }
    }

    pub(crate) fn err(&self, reason: &str) -> Error {
        Error::Parse {
            line: self.line_no,
            reason: reason.into(),
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), Error> {
        if self.rest.is_empty() {
            Ok(())
        } else {
            Err(Error::Parse {
                line: self.line_no + 1,
                reason: "unexpected trailing content".into(),
            })
        }
    }
}

/// A bijection on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n as u16).collect(),
        }
    }

    pub fn from_values(values: Vec<u16>) -> Result<Self, Error> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::NotAPermutation { n });
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { map: values })
    }

    /// Uniform random permutation (Fisher-Yates via the given RNG).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<u16> = (0..n as u16).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Permutation { map: inv }
    }

    /// `self` composed after `inner`: `(self.compose(inner))(x) = self(inner(x))`.
    pub fn compose(&self, inner: &Permutation) -> Self {
        let map = inner.map.iter().map(|&x| self.map[x as usize]).collect();
        Permutation { map }
    }

    pub fn values(&self) -> &[u16] {
        &self.map
    }
}

/// Permutations of the row layers, column layers, file layers and symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationQuadruple {
    pub row_layers: Permutation,
    pub column_layers: Permutation,
    pub file_layers: Permutation,
    pub symbols: Permutation,
}

impl PermutationQuadruple {
    pub fn identity(n: usize) -> Self {
        PermutationQuadruple {
            row_layers: Permutation::identity(n),
            column_layers: Permutation::identity(n),
            file_layers: Permutation::identity(n),
            symbols: Permutation::identity(n),
        }
    }

    /// Four independent uniform permutations.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        PermutationQuadruple {
            row_layers: Permutation::random(n, rng),
            column_layers: Permutation::random(n, rng),
            file_layers: Permutation::random(n, rng),
            symbols: Permutation::random(n, rng),
        }
    }

    pub fn len(&self) -> usize {
        self.row_layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_layers.is_empty()
    }

    pub fn check_len(&self, n: usize) -> Result<(), Error> {
        for p in [
            &self.row_layers,
            &self.column_layers,
            &self.file_layers,
            &self.symbols,
        ] {
            if p.len() != n {
                return Err(Error::PermutationSizeMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
        }
        Ok(())
    }

    /// Componentwise composition: `self` applied after `inner`.
    pub fn compose(&self, inner: &PermutationQuadruple) -> Self {
        PermutationQuadruple {
            row_layers: self.row_layers.compose(&inner.row_layers),
            column_layers: self.column_layers.compose(&inner.column_layers),
            file_layers: self.file_layers.compose(&inner.file_layers),
            symbols: self.symbols.compose(&inner.symbols),
        }
    }
}

/// Seeded sampling of a quadruple; deterministic for a fixed seed.
pub fn random_quadruple(n: usize, seed: u64) -> PermutationQuadruple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PermutationQuadruple::random(n, &mut rng)
}

/// Applies a quadruple to an arbitrary Latin cube:
/// `L'(i,j,k) = tau4(L(tau1^-1(i), tau2^-1(j), tau3^-1(k)))`.
pub fn permute_cube(cube: &LatinCube, q: &PermutationQuadruple) -> Result<LatinCube, Error> {
    let n = cube.n();
    q.check_len(n)?;
    let inv_r = q.row_layers.inverse();
    let inv_c = q.column_layers.inverse();
    let inv_f = q.file_layers.inverse();
    let mut entries = vec![0u16; n * n * n];
    for i in 0..n {
        let pi = inv_r.apply(i);
        for j in 0..n {
            let pj = inv_c.apply(j);
            for k in 0..n {
                let pk = inv_f.apply(k);
                entries[(i * n + j) * n + k] = q.symbols.apply(cube.get(pi, pj, pk)) as u16;
            }
        }
    }
    LatinCube::from_entries(n, entries)
}

/// A Latin cube of the form sigma(B): the Boolean cube with permuted layers
/// and symbols, carrying the quadruple as the structure witness.
///
/// Precomputes the coordinate pullbacks and per-line symbol inverses so that
/// 3-cube completion and block membership are O(1).
#[derive(Debug, Clone)]
pub struct StructuredCube {
    base_t: u32,
    quadruple: PermutationQuadruple,
    cube: LatinCube,
    // Pullbacks: enc(tau^-1(x)) for each visible coordinate / symbol.
    inv_rows: Vec<u16>,
    inv_cols: Vec<u16>,
    inv_files: Vec<u16>,
    inv_syms: Vec<u16>,
    // Per-line symbol inverses.
    by_row: Vec<u16>,    // (i*n + k)*n + s -> j with L(i,j,k) = s
    by_column: Vec<u16>, // (j*n + k)*n + s -> i with L(i,j,k) = s
    by_file: Vec<u16>,   // (i*n + j)*n + s -> k with L(i,j,k) = s
}

impl StructuredCube {
    /// Applies sigma to the Boolean cube of order 2^t.
    pub fn new(t: u32, quadruple: PermutationQuadruple) -> Result<Self, Error> {
        let order = Order::pow2(t)?;
        let n = order.n();
        quadruple.check_len(n)?;
        let inv_rows = quadruple.row_layers.inverse().map;
        let inv_cols = quadruple.column_layers.inverse().map;
        let inv_files = quadruple.file_layers.inverse().map;
        let inv_syms = quadruple.symbols.inverse().map;
        let tau4 = quadruple.symbols.values();

        let mut entries = vec![0u16; n * n * n];
        for i in 0..n {
            let pi = inv_rows[i] as usize;
            for j in 0..n {
                let pij = pi ^ inv_cols[j] as usize;
                let base = (i * n + j) * n;
                for k in 0..n {
                    entries[base + k] = tau4[pij ^ inv_files[k] as usize];
                }
            }
        }
        let cube = LatinCube { order, entries };

        let mut by_row = vec![0u16; n * n * n];
        let mut by_column = vec![0u16; n * n * n];
        let mut by_file = vec![0u16; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = cube.get(i, j, k);
                    by_row[(i * n + k) * n + s] = j as u16;
                    by_column[(j * n + k) * n + s] = i as u16;
                    by_file[(i * n + j) * n + s] = k as u16;
                }
            }
        }

        Ok(StructuredCube {
            base_t: t,
            quadruple,
            cube,
            inv_rows,
            inv_cols,
            inv_files,
            inv_syms,
            by_row,
            by_column,
            by_file,
        })
    }

    /// The Boolean cube itself (identity quadruple).
    pub fn boolean(t: u32) -> Result<Self, Error> {
        let n = 1usize << t;
        StructuredCube::new(t, PermutationQuadruple::identity(n))
    }

    /// Recovers a structure witness from a bare cube, if one exists.
    ///
    /// Normalizes the pullbacks of row/column/file index 0 to the zero vector,
    /// reads the symbol group off file layer 0, picks a basis for it, and then
    /// verifies the reconstruction against every entry.
    pub fn from_cube(cube: &LatinCube) -> Result<Self, Error> {
        let n = cube.n();
        let t = match cube.order().exponent() {
            Some(t) if t >= 1 => t,
            _ => return Err(Error::NotBooleanOrder { n }),
        };
        let report = cube.validate();
        if !report.is_ok() {
            return Err(Error::NotBooleanStructured {
                reason: "not a Latin cube".into(),
            });
        }

        // Symbol lookup along the axes of file layer 0.
        let mut row_of_sym = vec![0usize; n];
        let mut col_of_sym = vec![0usize; n];
        for x in 0..n {
            row_of_sym[cube.get(x, 0, 0)] = x;
            col_of_sym[cube.get(0, x, 0)] = x;
        }
        // Quasigroup induced on symbols; for sigma(B) this is XOR conjugated
        // by tau4.
        let star = |a: usize, b: usize| cube.get(row_of_sym[a], col_of_sym[b], 0);

        let s0 = cube.get(0, 0, 0);
        let mut vec_of: Vec<Option<u16>> = vec![None; n];
        vec_of[s0] = Some(0);
        let mut assigned: Vec<(usize, u16)> = vec![(s0, 0)];
        let mut basis = 0u32;
        for s in 0..n {
            if vec_of[s].is_some() {
                continue;
            }
            let bit = 1u16 << basis;
            basis += 1;
            if (bit as usize) >= n {
                return Err(Error::NotBooleanStructured {
                    reason: "symbol products do not close under a Z2 group".into(),
                });
            }
            for (prev, v) in assigned.clone() {
                let ns = star(s, prev);
                let nv = bit ^ v;
                match vec_of[ns] {
                    Some(old) if old != nv => {
                        return Err(Error::NotBooleanStructured {
                            reason: "inconsistent symbol products".into(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        vec_of[ns] = Some(nv);
                        assigned.push((ns, nv));
                    }
                }
            }
        }
        if assigned.len() != n {
            return Err(Error::NotBooleanStructured {
                reason: "symbol products do not span all symbols".into(),
            });
        }

        // tau4 maps vectors to symbols; pullbacks come from the axis lines.
        let mut tau4 = vec![0u16; n];
        for (s, v) in &assigned {
            tau4[*v as usize] = *s as u16;
        }
        let tau4 = Permutation::from_values(tau4).map_err(|_| Error::NotBooleanStructured {
            reason: "symbol vectors are not distinct".into(),
        })?;
        let enc = |s: usize| vec_of[s].expect("all symbols assigned") as usize;
        let p1: Vec<u16> = (0..n).map(|i| enc(cube.get(i, 0, 0)) as u16).collect();
        let p2: Vec<u16> = (0..n).map(|j| enc(cube.get(0, j, 0)) as u16).collect();
        let p3: Vec<u16> = (0..n).map(|k| enc(cube.get(0, 0, k)) as u16).collect();
        let mk_tau = |p: Vec<u16>| -> Result<Permutation, Error> {
            Permutation::from_values(p)
                .map_err(|_| Error::NotBooleanStructured {
                    reason: "coordinate pullback is not a bijection".into(),
                })
                .map(|perm| perm.inverse())
        };
        let quadruple = PermutationQuadruple {
            row_layers: mk_tau(p1)?,
            column_layers: mk_tau(p2)?,
            file_layers: mk_tau(p3)?,
            symbols: tau4,
        };

        let sc = StructuredCube::new(t, quadruple)?;
        if sc.cube.entries != cube.entries {
            return Err(Error::NotBooleanStructured {
                reason: "entries disagree with the reconstructed structure".into(),
            });
        }
        Ok(sc)
    }

    pub fn n(&self) -> usize {
        self.cube.n()
    }

    pub fn base_t(&self) -> u32 {
        self.base_t
    }

    pub fn quadruple(&self) -> &PermutationQuadruple {
        &self.quadruple
    }

    pub fn cube(&self) -> &LatinCube {
        &self.cube
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> usize {
        self.cube.get(i, j, k)
    }

    #[inline]
    pub fn get_cell(&self, cell: Cell) -> usize {
        self.cube.get_cell(cell)
    }

    // Pullback encodings `enc(tau^-1(x))`, the coordinates of x in B.
    #[inline]
    pub(crate) fn p1(&self, i: usize) -> usize {
        self.inv_rows[i] as usize
    }

    #[inline]
    pub(crate) fn p2(&self, j: usize) -> usize {
        self.inv_cols[j] as usize
    }

    #[inline]
    pub(crate) fn p3(&self, k: usize) -> usize {
        self.inv_files[k] as usize
    }

    #[inline]
    pub(crate) fn p4(&self, s: usize) -> usize {
        self.inv_syms[s] as usize
    }

    /// j with L(i, j, k) = s.
    #[inline]
    pub(crate) fn row_inverse(&self, i: usize, k: usize, s: usize) -> usize {
        let n = self.cube.n();
        self.by_row[(i * n + k) * n + s] as usize
    }

    /// i with L(i, j, k) = s.
    #[inline]
    pub(crate) fn col_inverse(&self, j: usize, k: usize, s: usize) -> usize {
        let n = self.cube.n();
        self.by_column[(j * n + k) * n + s] as usize
    }

    /// k with L(i, j, k) = s.
    #[inline]
    pub(crate) fn file_inverse(&self, i: usize, j: usize, s: usize) -> usize {
        let n = self.cube.n();
        self.by_file[(i * n + j) * n + s] as usize
    }
}
