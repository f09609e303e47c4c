use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::AddAssign;

use super::search::check_input;
use super::{AlgorithmHandle, HierarchicalMethod, Prober, Verdict, VerdictStatus};
use crate::error::{Error, Result};
use crate::hierarchical::Linkage;
use crate::model::{Clustering, WeightedDataset};
use crate::partitional::Objective;

/// Empirical category. The first three mirror weight-sensitive,
/// weight-considering and weight-robust; `Undetermined` covers evidence that
/// fits none of them, such as inconclusive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Sensitive,
    Considering,
    Robust,
    Undetermined,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Sensitive => "sensitive",
            Category::Considering => "considering",
            Category::Robust => "robust",
            Category::Undetermined => "undetermined",
        }
    }

    pub fn decide(counts: &EvidenceCounts) -> Self {
        let (r, c, i) = (counts.responsive, counts.certified, counts.inconclusive);
        if r > 0 && c > 0 {
            Category::Considering
        } else if r > 0 && i == 0 {
            Category::Sensitive
        } else if c > 0 && r == 0 && i == 0 {
            Category::Robust
        } else {
            Category::Undetermined
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvidenceCounts {
    pub responsive: usize,
    pub certified: usize,
    pub inconclusive: usize,
    /// Range clusterings with a singleton cluster, not probed for ratio-cut
    /// and average linkage.
    pub skipped_singleton: usize,
    /// Datasets the algorithm cannot run on (wrong table kind, no coordinates, `k >= n`).
    pub skipped_datasets: usize,
}

impl AddAssign for EvidenceCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.responsive += rhs.responsive;
        self.certified += rhs.certified;
        self.inconclusive += rhs.inconclusive;
        self.skipped_singleton += rhs.skipped_singleton;
        self.skipped_datasets += rhs.skipped_datasets;
    }
}

/// Everything probed on one dataset for one cluster count.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEvidence {
    pub dataset: usize,
    /// Cluster count for partitional algorithms.
    pub k: Option<usize>,
    /// Estimated range, in canonical order.
    pub range: Vec<Clustering>,
    pub verdicts: Vec<Verdict>,
    pub counts: EvidenceCounts,
}

/// Classification of one algorithm over one dataset family. The category is
/// empirical evidence over the sampled datasets, not a proof over all data.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryReport {
    pub algorithm: AlgorithmHandle,
    pub family: String,
    pub category: Category,
    pub counts: EvidenceCounts,
    pub evidence: Vec<DatasetEvidence>,
}

impl CategoryReport {
    /// Aggregates per-dataset evidence. Order of `evidence` is preserved.
    pub fn from_evidence(algorithm: AlgorithmHandle, family: impl Into<String>, evidence: Vec<DatasetEvidence>) -> Self {
        let mut counts = EvidenceCounts::default();
        for e in &evidence {
            counts += e.counts;
        }
        Self { algorithm, family: family.into(), category: Category::decide(&counts), counts, evidence }
    }

    /// Combines two reports on the same algorithm.
    pub fn merge(mut self, other: CategoryReport) -> Self {
        if self.family != other.family {
            self.family = format!("{}+{}", self.family, other.family);
        }
        self.evidence.extend(other.evidence);
        self.counts += other.counts;
        self.category = Category::decide(&self.counts);
        self
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.evidence.iter().flat_map(|e| e.verdicts.iter())
    }
}

fn skips_singletons(a: &AlgorithmHandle) -> bool {
    matches!(
        a,
        AlgorithmHandle::Partitional { objective: Objective::RatioCut, .. }
            | AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(Linkage::Average))
    )
}

impl Prober {
    /// Probes every clustering in the estimated range of `a` on `ds`.
    ///
    /// Each clustering gets a search verdict and, where a theorem applies, a
    /// certificate. Responsive verdicts are replayed. A replay failure or a
    /// clustering that is both certified and responsive is an
    /// [`Error::Inconsistency`].
    pub fn probe_dataset(&self, a: &AlgorithmHandle, ds: &WeightedDataset, index: usize) -> Result<DatasetEvidence> {
        let k = match a {
            AlgorithmHandle::Partitional { k, .. } => Some(*k),
            AlgorithmHandle::Hierarchical(_) => None,
        };
        let mut evidence = DatasetEvidence { dataset: index, k, range: Vec::new(), verdicts: Vec::new(), counts: EvidenceCounts::default() };
        if check_input(a, ds).is_err() || k.is_some_and(|k| k >= ds.n()) {
            evidence.counts.skipped_datasets = 1;
            return Ok(evidence);
        }
        let mut pool = self.pool(*a, ds);
        let range = pool.range()?;
        evidence.range = range.keys().cloned().collect();
        for (c, sample) in &range {
            if skips_singletons(a) && c.has_singleton() {
                evidence.counts.skipped_singleton += 1;
                continue;
            }
            let mut verdict = pool.responsiveness(c, Some(&sample.weights))?;
            let certified = self.certificate(a, ds, c)?;
            match verdict.status {
                VerdictStatus::Responsive => {
                    if certified {
                        return Err(Error::Inconsistency(format!(
                            "{a} on dataset {index}: clustering {c} is certified robust but responsive"
                        )));
                    }
                    if !verdict.replay(a, ds, self.solver())? {
                        return Err(Error::Inconsistency(format!(
                            "{a} on dataset {index}: witnesses for {c} do not replay"
                        )));
                    }
                    evidence.counts.responsive += 1;
                }
                _ if certified => {
                    verdict.status = VerdictStatus::RobustOnClustering;
                    evidence.counts.certified += 1;
                }
                _ => evidence.counts.inconclusive += 1,
            }
            evidence.verdicts.push(verdict);
        }
        Ok(evidence)
    }

    /// Probes `a` on every dataset, once per cluster count in `ks` for
    /// partitional algorithms, and aggregates the verdicts into a category.
    pub fn classify(
        &self,
        a: &AlgorithmHandle,
        family: &str,
        datasets: &[WeightedDataset],
        ks: &[usize],
    ) -> Result<CategoryReport> {
        let mut evidence = Vec::new();
        for (index, ds) in datasets.iter().enumerate() {
            if a.is_partitional() {
                for &k in ks {
                    evidence.push(self.probe_dataset(&a.with_k(k), ds, index)?);
                }
            } else {
                evidence.push(self.probe_dataset(a, ds, index)?);
            }
        }
        Ok(CategoryReport::from_evidence(*a, family, evidence))
    }
}
