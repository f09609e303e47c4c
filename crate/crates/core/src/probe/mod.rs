//! Weight-response probing.
//!
//! An algorithm is *weight-responsive* on a clustering `C` when one weighting
//! makes it output `C` and another makes it not output `C`. The [`Prober`]
//! searches for such witness weightings, issues robustness certificates where
//! a theorem guarantees that no witness exists, and aggregates both into a
//! sensitive / considering / robust classification.
//!
//! Robustness is never inferred from a failed search: an exhausted search is
//! reported as inconclusive.

mod classify;
mod search;

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hierarchical::{agglomerate, divisive, Linkage};
use crate::model::{Clustering, Dendrogram, TableKind, WeightedDataset, DEFAULT_MAX_N};
use crate::partitional::{ExactPartitioner, ExactSolver, Objective, ObjectiveSpec};

pub use classify::{Category, CategoryReport, DatasetEvidence, EvidenceCounts};
pub use search::{RangeSample, Separability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HierarchicalMethod {
    Linkage(Linkage),
    /// Divisive clustering that splits with the exact minimizer of an objective.
    Divisive(Objective),
}

/// A clustering algorithm the probe can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgorithmHandle {
    Partitional { objective: Objective, k: usize },
    Hierarchical(HierarchicalMethod),
}

impl AlgorithmHandle {
    /// The twelve algorithms of the classification grid, partitional ones with `k = 2`.
    pub fn catalog() -> Vec<AlgorithmHandle> {
        let mut out: Vec<AlgorithmHandle> =
            Objective::ALL.iter().map(|&objective| AlgorithmHandle::Partitional { objective, k: 2 }).collect();
        out.extend(Linkage::ALL.iter().map(|&l| AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l))));
        out.push(AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(Objective::KMeans)));
        out
    }

    /// Parses names such as `kmeans`, `average`, `divisive(kmeans)`.
    /// Partitional algorithms take `k`, defaulting to 2.
    pub fn parse(name: &str, k: Option<usize>) -> Result<Self> {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix("divisive(").and_then(|s| s.strip_suffix(')')) {
            let objective: Objective = inner.parse()?;
            if objective.table_kind() != TableKind::Distance {
                return Err(Error::UnsupportedInput { algorithm: name.into(), reason: "divisive needs a distance objective" });
            }
            return Ok(AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(objective)));
        }
        if name == "bisecting-kmeans" {
            return Ok(AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(Objective::KMeans)));
        }
        if let Ok(l) = name.parse::<Linkage>() {
            return Ok(AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l)));
        }
        let objective: Objective = name
            .parse()
            .map_err(|_| Error::UnsupportedInput { algorithm: name.into(), reason: "unknown algorithm" })?;
        Ok(AlgorithmHandle::Partitional { objective, k: k.unwrap_or(2) })
    }

    pub fn name(&self) -> String {
        match self {
            AlgorithmHandle::Partitional { objective, .. } => objective.name().into(),
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l)) => l.name().into(),
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(o)) => format!("divisive({o})"),
        }
    }

    pub fn is_partitional(&self) -> bool {
        matches!(self, AlgorithmHandle::Partitional { .. })
    }

    pub fn table_kind(&self) -> TableKind {
        match self {
            AlgorithmHandle::Partitional { objective, .. } => objective.table_kind(),
            AlgorithmHandle::Hierarchical(_) => TableKind::Distance,
        }
    }

    /// Whether the algorithm never reads weights.
    pub fn is_weight_free(&self) -> bool {
        match self {
            AlgorithmHandle::Partitional { objective, .. } => objective.is_weight_free(),
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l)) => l.is_weight_free(),
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(o)) => o.is_weight_free(),
        }
    }

    pub fn requires_coords(&self) -> bool {
        matches!(self, AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(Linkage::Ward)))
    }

    /// Same algorithm with a different cluster count (no-op for hierarchies).
    pub fn with_k(self, k: usize) -> Self {
        match self {
            AlgorithmHandle::Partitional { objective, .. } => AlgorithmHandle::Partitional { objective, k },
            h => h,
        }
    }

    /// Runs the algorithm on `ds`. Partitional algorithms use the exact solver.
    pub fn run(&self, ds: &WeightedDataset, solver: ExactSolver) -> Result<AlgorithmOutput> {
        if ds.kind() != self.table_kind() {
            return Err(Error::KindMismatch { expected: self.table_kind().as_str() });
        }
        match *self {
            AlgorithmHandle::Partitional { objective, k } => {
                solver.minimize(ds, ObjectiveSpec::new(objective, k)).map(AlgorithmOutput::Flat)
            }
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l)) => agglomerate(ds, l).map(AlgorithmOutput::Tree),
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Divisive(objective)) => {
                divisive(ds, &ExactPartitioner { objective, solver }).map(AlgorithmOutput::Tree)
            }
        }
    }
}

impl fmt::Display for AlgorithmHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgorithmOutput {
    Flat(Clustering),
    Tree(Dendrogram),
}

impl AlgorithmOutput {
    /// Whether the output "outputs" `c`: equality for a flat clustering, every
    /// block being a node cluster for a dendrogram.
    pub fn outputs(&self, c: &Clustering) -> bool {
        match self {
            AlgorithmOutput::Flat(own) => own == c,
            AlgorithmOutput::Tree(d) => d.outputs(c),
        }
    }

    /// Every clustering this output outputs.
    pub fn clusterings(&self) -> Vec<Clustering> {
        match self {
            AlgorithmOutput::Flat(c) => vec![c.clone()],
            AlgorithmOutput::Tree(d) => d.clusterings(),
        }
    }
}

/// A parameterized weight function.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    Unit,
    /// Independent log-uniform weights on `[lo, hi]`.
    LogUniform { lo: f64, hi: f64, seed: u64 },
    /// Weight `w` on every element of `set`, 1 elsewhere.
    Spike { set: Vec<usize>, w: f64 },
    /// Weight `w` on `x1` and `x2`, 1 elsewhere.
    PairSpike { x1: usize, x2: usize, w: f64 },
    Explicit(Vec<f64>),
}

impl WeightFamily {
    pub fn weights(&self, n: usize) -> Vec<f64> {
        match self {
            WeightFamily::Unit => vec![1.0; n],
            WeightFamily::LogUniform { lo, hi, seed } => {
                let mut rng = crate::generate::lab_rng(*seed);
                log_uniform(n, *lo, *hi, &mut rng)
            }
            WeightFamily::Spike { set, w } => {
                let mut out = vec![1.0; n];
                for &x in set {
                    out[x] = *w;
                }
                out
            }
            WeightFamily::PairSpike { x1, x2, w } => {
                let mut out = vec![1.0; n];
                out[*x1] = *w;
                out[*x2] = *w;
                out
            }
            WeightFamily::Explicit(w) => w.clone(),
        }
    }

    /// The spike height, for spike families.
    pub fn spike(&self) -> Option<f64> {
        match self {
            WeightFamily::Spike { w, .. } | WeightFamily::PairSpike { w, .. } => Some(*w),
            _ => None,
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFamily::Unit => f.write_str("unit"),
            WeightFamily::LogUniform { lo, hi, seed } => write!(f, "logUniform({lo},{hi},seed={seed})"),
            WeightFamily::Spike { set, w } => write!(f, "spike({set:?},W={w:e})"),
            WeightFamily::PairSpike { x1, x2, w } => write!(f, "pairSpike({x1},{x2},W={w:e})"),
            WeightFamily::Explicit(_) => f.write_str("explicit"),
        }
    }
}

/// `n` independent draws, log-uniform on `[lo, hi]`.
pub fn log_uniform<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    let (a, b) = (libm::log(lo), libm::log(hi));
    (0..n).map(|_| libm::exp(rng.random_range(a..=b))).collect()
}

/// Search parameters. All randomness derives from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Spike heights tried by every spike construction, in order.
    pub spike_ladder: Vec<f64>,
    /// Random weightings per search.
    pub random_samples: usize,
    pub random_lo: f64,
    pub random_hi: f64,
    pub seed: u64,
    /// Maximum algorithm runs per responsiveness probe.
    pub budget: usize,
    pub max_n: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            spike_ladder: (2..=9).map(|e| libm::pow(10.0, e as f64)).collect(),
            random_samples: 100,
            random_lo: 1e-2,
            random_hi: 1e2,
            seed: 0,
            budget: 2000,
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl ProbeConfig {
    pub fn largest_spike(&self) -> f64 {
        self.spike_ladder.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    /// Both witnesses were found.
    Responsive,
    /// A theorem certifies that no weighting removes the clustering.
    RobustOnClustering,
    /// Neither a pair of witnesses nor a certificate.
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::Responsive => "responsive",
            VerdictStatus::RobustOnClustering => "robustOnClustering",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of probing one clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub clustering: Clustering,
    pub status: VerdictStatus,
    /// Weights under which the algorithm outputs the clustering.
    pub witness_produce: Option<Vec<f64>>,
    /// Weights under which it does not.
    pub witness_remove: Option<Vec<f64>>,
    /// The construction that produced `witness_remove`.
    pub remove_family: Option<WeightFamily>,
    /// Algorithm runs spent.
    pub trials: usize,
    /// Largest spike height tried.
    pub max_w: f64,
}

impl Verdict {
    /// Re-runs the algorithm on both witnesses and checks they still behave
    /// as recorded. Non-responsive verdicts replay trivially.
    pub fn replay(&self, a: &AlgorithmHandle, ds: &WeightedDataset, solver: ExactSolver) -> Result<bool> {
        if self.status != VerdictStatus::Responsive {
            return Ok(true);
        }
        let (Some(produce), Some(remove)) = (&self.witness_produce, &self.witness_remove) else {
            return Ok(false);
        };
        let a = a.with_k(self.clustering.k());
        let yes = a.run(&ds.reweighted(produce.clone())?, solver)?.outputs(&self.clustering);
        let no = !a.run(&ds.reweighted(remove.clone())?, solver)?.outputs(&self.clustering);
        Ok(yes && no)
    }
}

pub use search::Prober;
