use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {n} out of range (must be between 1 and {max})")]
    InvalidOrder { n: usize, max: usize },

    #[error("exponent t={t} out of range (must be between 1 and {max})")]
    ExponentOutOfRange { t: u32, max: u32 },

    #[error("order {n} is not a power of two >= 2")]
    NotBooleanOrder { n: usize },

    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },

    #[error("cell ({i},{j},{k}) out of range for order {n}")]
    CellOutOfRange { i: usize, j: usize, k: usize, n: usize },

    #[error("symbol {symbol} out of range for order {n}")]
    SymbolOutOfRange { symbol: usize, n: usize },

    #[error("entry buffer has {got} entries, expected {expected}")]
    EntryCountMismatch { expected: usize, got: usize },

    #[error("values do not form a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("permutation length {got} does not match order {expected}")]
    PermutationSizeMismatch { expected: usize, got: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("cube is not a row/column/file/symbol permutation of a Boolean Latin cube: {reason}")]
    NotBooleanStructured { reason: String },

    #[error("column indices coincide (j2 = j1 = {j})")]
    DegenerateThreeCube { j: usize },

    #[error("3-cube symbol pattern violated at cell ({i},{j},{k})")]
    ThreeCubePattern { i: usize, j: usize, k: usize },

    #[error("block index {index} out of range for order {n}")]
    BlockIndexOutOfRange { index: usize, n: usize },

    #[error("order {n} too large for exhaustive check (cap {cap}); use sampled mode")]
    OrderTooLargeForExhaustive { n: usize, cap: usize },

    #[error("density {density} outside [0, 1]")]
    InvalidDensity { density: f64 },

    #[error("m must be at least 1")]
    InvalidCap,

    #[error("order {n} is odd; the half construction needs an even order")]
    OddOrder { n: usize },

    #[error("declared caps violated: {detail}")]
    CapsViolated { detail: String },

    #[error("enumeration supports orders up to {max}, got {n}")]
    EnumerationOrderTooLarge { n: usize, max: usize },

    #[error("invalid solver parameters: {reason}")]
    InvalidParams { reason: String },

    #[error("invalid bounds parameters: {reason}")]
    InvalidBoundsParams { reason: String },

    #[error("factorial argument {value} is not positive")]
    DegenerateBounds { value: f64 },

    #[error("invariant violated: {detail}")]
    Invariant { detail: String },
}
