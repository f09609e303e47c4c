use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pair table is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("pair table is asymmetric at ({i}, {j}): {a} vs {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("negative entry {value} at ({i}, {j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("non-finite entry at ({i}, {j})")]
    NonFiniteEntry { i: usize, j: usize },

    #[error("non-positive weight {value} for element {index}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("distance table has a non-zero diagonal entry at {index}")]
    NonZeroDiagonal { index: usize },

    #[error("invalid metric: d({x}, {y}) = 0 but d({x}, {z}) != d({y}, {z})")]
    ZeroDistanceNonDuplicate { x: usize, y: usize, z: usize },

    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("coordinates disagree with the distance table at ({i}, {j})")]
    CoordsMismatch { i: usize, j: usize },

    #[error("weight {value} of element {index} is not an integer")]
    NonIntegerWeight { index: usize, value: f64 },

    #[error("operation requires a {expected} table")]
    KindMismatch { expected: &'static str },

    #[error("invalid clustering: {0}")]
    InvalidClustering(String),

    #[error("refusing to enumerate partitions of {n} elements: the enumeration cap is {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("Ward linkage requires element coordinates")]
    MissingCoords,

    #[error("invalid dendrogram: {0}")]
    InvalidDendrogram(String),

    #[error("malformed tree text at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("partitional step returned {got} clusters, expected 2")]
    BadSplit { got: usize },

    #[error("infeasible generator parameters: {0}")]
    InfeasibleGenerator(String),

    #[error("algorithm {algorithm} cannot run on this input: {reason}")]
    UnsupportedInput {
        algorithm: String,
        reason: &'static str,
    },

    #[error("theorem inconsistency: {0}")]
    Inconsistency(String),
}
