//! Static range products and tree-path products over arbitrary semigroups.
//!
//! Every structure answers a query by multiplying a small number of *precomputed*
//! semigroup elements. That number is reported with each answer as
//! [`QueryAnswer::elements_used`] and is bounded per structure:
//!
//! | structure                 | stored elements          | elements per query              |
//! |---------------------------|--------------------------|---------------------------------|
//! | [`OneStepTable`]          | `n(n+1)/2`               | 1                               |
//! | [`TwoStepStructure`]      | `n*ceil(log n) + n`      | 2                               |
//! | [`KStepStructure`]        | `O(k n lambda(k, n))`    | `k`                             |
//! | [`SimpleRangeTree`]       | `2n - 1`                 | `2 ceil(log n)`                 |
//! | [`LinearAlphaStructure`]  | `O(n)`                   | `O(alpha(n))`                   |
//! | [`TreeKStep`]             | `O(k n lambda(k, n))`    | `k` (ancestor), `2k` (general)  |
//! | [`TreeLinearAlpha`]       | `O(n)`                   | `O(alpha(n))`                   |
//!
//! Only the semigroup operation is used on elements; no inverses are assumed.

pub mod cli;
pub mod hierarchy;
pub mod io;
pub mod linear;
pub mod semigroup;
pub mod tree;

pub use hierarchy::{ackermann_a, ackermann_b, alpha, lambda, SaturatingNat};
pub use linear::{
    KStepStructure, LinearAlphaStructure, OneStepTable, RangeStructure, SimpleRangeTree, TwoStepStructure,
};
pub use semigroup::{
    fold_interval, registry_lookup, Mat2, Mat2Mod251, MaxI64, MinI64, Monoid, NamedSemigroup, QueryAnswer, Registered,
    Semigroup, SumU64,
};
pub use tree::{brute_path_fold, PathStructure, RootedTree, TreeKStep, TreeLinearAlpha, TreePreliminary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input sequence is empty")]
    EmptyInput,
    #[error("interval ({i}, {j}) is out of range for length {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("interval ({i}, {j}) is inverted")]
    InvertedInterval { i: usize, j: usize },
    #[error("step budget {0} is unsupported; k must be at least 2 (use OneStepTable for one step)")]
    UnsupportedStepBudget(usize),
    #[error("semigroup `{0}` not found")]
    UnknownSemigroup(String),
    #[error("argument must be at least 1")]
    ZeroArgument,
    #[error("vertex {0} is not in the tree")]
    InvalidVertex(usize),
    #[error("depth {depth} exceeds the depth {max} of the vertex")]
    DepthOutOfRange { depth: usize, max: usize },
    #[error("component target size must be at least 1")]
    InvalidTargetSize,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
