//! Construction of Latin cubes that avoid per-cell forbidden symbol sets.
//!
//! The pipeline starts from the Boolean Latin cube over `Z_2^t` (entry
//! `i ^ j ^ k`), samples layer/symbol permutations until the conflict
//! statistics against the forbidden sets pass a family of thresholds, and
//! then clears the remaining conflicts by swapping a set of pairwise
//! disjoint 3-cubes chosen under overload bookkeeping.
//!
//! Modules:
//! - [`cube`]: cube representation, Boolean construction, permutation
//!   action, validation, text format.
//! - [`structure`]: 3-cubes and swaps, block/transversal-set/symbol-set
//!   partitions, structural property checkers.
//! - [`forbidden`]: the forbidden-set model, instance generators, conflict
//!   analytics, text format.
//! - [`engine`]: the two-phase solver with restarts.
//! - [`oracle`]: exact avoidability decisions for small orders.
//! - [`bounds`]: numeric evaluation of the feasibility inequalities.

pub mod bounds;
pub mod cube;
pub mod engine;
pub mod error;
pub mod forbidden;
pub mod oracle;
pub mod structure;

pub use cube::{
    permute_cube, random_quadruple, Cell, LatinCube, Order, Permutation, PermutationQuadruple,
    StructuredCube,
};
pub use error::Error;
pub use forbidden::{allowed, conflict_stats, conflicts, ConflictReport, ForbiddenCube};
pub use structure::{
    intersect, swap, three_cube_from_pair, three_cubes_through, ThreeCube,
};
