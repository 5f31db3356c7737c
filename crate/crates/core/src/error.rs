//! Shared error type. Every fallible operation in the crate returns
//! [`Result`]; panics are reserved for internal invariant violations.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Ground sets and graphs are backed by single `u64` bitmasks.
    #[error("ground set of size {n} exceeds the bitset capacity of {max}")]
    CapacityExceeded { n: usize, max: usize },

    /// An element or vertex index outside `0..n`.
    #[error("index {index} is out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("self-loop at vertex {vertex} is not allowed")]
    SelfLoop { vertex: usize },

    #[error("edge {u}-{v} was added twice")]
    DuplicateEdge { u: usize, v: usize },

    #[error("operation requires a graph with at least one vertex")]
    EmptyGraph,

    /// Brute-force oracles refuse inputs past their documented range
    /// instead of silently taking hours.
    #[error("{what} supports {limit} at most, got {value}")]
    BruteForceLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("denominator must be nonzero")]
    ZeroDenominator,

    /// A probability vector that is not a distribution.
    #[error("invalid distribution: {reason}")]
    InvalidDistribution { reason: &'static str },

    /// Distribution length and graph vertex count must agree.
    #[error("dimension mismatch: distribution has {got} entries, graph has {expected} vertices")]
    DimensionMismatch { got: usize, expected: usize },

    /// Uniformization is only defined once the support is a clique.
    #[error("support is not a clique: vertices {u} and {v} are non-adjacent")]
    SupportNotClique { u: usize, v: usize },

    /// Subset families reject duplicates and mixed ground sets.
    #[error("duplicate member {member} in family")]
    DuplicateMember { member: String },

    #[error("family member {member} lives on a ground set of size {got}, expected {expected}")]
    GroundSetMismatch {
        member: String,
        got: usize,
        expected: usize,
    },

    /// Covering operations require every member to be an l-subset.
    #[error("family member {member} has {got} elements, expected blocks of size {expected}")]
    WrongBlockSize {
        member: String,
        got: usize,
        expected: usize,
    },

    /// Covering instances require n >= k >= l >= 0.
    #[error("invalid covering instance: need n >= k >= l, got n={n}, k={k}, l={l}")]
    InvalidInstance { n: usize, k: usize, l: usize },

    /// The conditional bound is only meaningful for covering families.
    #[error("family is not a covering: the {k}-subset {witness} contains no member")]
    NotACovering { k: usize, witness: String },

    /// A documented precondition was violated.
    #[error("precondition violated: {what}")]
    Precondition { what: &'static str },

    /// Text-format parse failure (edge lists, families).
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
