//! Shared domain types: weighted datasets, clusterings, dendrograms, and the
//! set-partition enumeration that backs every exact solver.

mod clustering;
mod dataset;
mod dendrogram;
mod partitions;
mod table;

pub use clustering::Clustering;
pub use dataset::{dedupe, expand, validate_dataset, Deduped, Expanded, WeightedDataset};
pub use dendrogram::Dendrogram;
pub use partitions::{enumerate_partitions, stirling2, Partitions, DEFAULT_MAX_N};
pub use table::{PairTable, TableKind};
