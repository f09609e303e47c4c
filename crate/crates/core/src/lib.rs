//! Exact clustering of weighted data.
//!
//! `clusterlab-core` implements the partitional objectives (k-means, k-median,
//! k-medoids, min-sum, min-diameter, k-center, ratio-cut) and the hierarchical
//! procedures (single, complete, average and Ward linkage, plus divisive
//! clustering over any exact partitional solver) on data where every element
//! carries a positive weight. On top of those it provides detectors for the
//! clusterability notions that govern how these algorithms react to weights
//! (perfect, separation-uniform and nice clusterings) and a probe that searches
//! for witness weightings and classifies an algorithm as weight-sensitive,
//! weight-considering or weight-robust.
//!
//! All solvers are exact: partitional minimizers enumerate every set
//! partition, so inputs are limited to desk-scale sizes (see
//! [`DEFAULT_MAX_N`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and parallel campaigns live in the `clusterlab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod generate;
pub mod hierarchical;
pub mod model;
mod numeric;
pub mod partitional;
pub mod probe;
pub mod structure;

pub use error::{Error, Result};
pub use hierarchical::{agglomerate, divisive, linkage_value, Centroid, Linkage, Partitioner};
pub use model::{
    dedupe, enumerate_partitions, expand, stirling2, validate_dataset, Clustering, Deduped,
    Dendrogram, Expanded, PairTable, Partitions, TableKind, WeightedDataset, DEFAULT_MAX_N,
};
pub use partitional::{exact_minimize, CostValue, ExactSolver, Objective, ObjectiveSpec};
pub use probe::{
    AlgorithmHandle, AlgorithmOutput, Category, CategoryReport, DatasetEvidence, EvidenceCounts,
    HierarchicalMethod, ProbeConfig, Prober, Verdict, VerdictStatus, WeightFamily,
};
pub use structure::{Detection, StructureReport, Witness};
