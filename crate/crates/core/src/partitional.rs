//! Partitional objectives on weighted data and an exact minimizer.
//!
//! Pair sums in k-means and min-sum run over unordered pairs, which makes the
//! k-means cost coincide with the weighted center-of-mass formulation.
//! k-median and k-medoids are exemplar objectives: the exemplar is a member of
//! its cluster, with plain distances for k-median and squared distances for
//! k-medoids.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::hierarchical::Partitioner;
use crate::model::{enumerate_partitions, Clustering, TableKind, WeightedDataset, DEFAULT_MAX_N};
use crate::numeric::{within_rel, CompensatedSum};

/// Costs within this relative distance of the minimum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Objective {
    KMeans,
    KMedian,
    KMedoids,
    MinSum,
    MinDiameter,
    KCenter,
    RatioCut,
}

impl Objective {
    pub const ALL: [Objective; 7] = [
        Objective::KMeans,
        Objective::KMedian,
        Objective::KMedoids,
        Objective::MinSum,
        Objective::MinDiameter,
        Objective::KCenter,
        Objective::RatioCut,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::KMeans => "kmeans",
            Objective::KMedian => "kmedian",
            Objective::KMedoids => "kmedoids",
            Objective::MinSum => "minsum",
            Objective::MinDiameter => "mindiameter",
            Objective::KCenter => "kcenter",
            Objective::RatioCut => "ratiocut",
        }
    }

    /// The kind of pair table the objective is defined on.
    pub fn table_kind(self) -> TableKind {
        match self {
            Objective::RatioCut => TableKind::Similarity,
            _ => TableKind::Distance,
        }
    }

    /// Whether the cost never reads the weights.
    pub fn is_weight_free(self) -> bool {
        matches!(self, Objective::MinDiameter | Objective::KCenter)
    }

    /// Cost of `c` on `ds`.
    pub fn cost(self, c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
        check_kind(self, ds)?;
        if c.n() != ds.n() {
            return Err(Error::DimensionMismatch { what: "clustering", got: c.n(), expected: ds.n() });
        }
        let value = Evaluator::new(self, ds, c.k()).cost(c.labels());
        Ok(CostValue { value, objective: self })
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::UnsupportedInput { algorithm: s.into(), reason: "unknown objective" })
    }
}

/// An objective together with the number of clusters to find.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObjectiveSpec {
    pub objective: Objective,
    pub k: usize,
}

impl ObjectiveSpec {
    pub fn new(objective: Objective, k: usize) -> Self {
        Self { objective, k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostValue {
    pub value: f64,
    pub objective: Objective,
}

fn check_kind(objective: Objective, ds: &WeightedDataset) -> Result<()> {
    if ds.kind() != objective.table_kind() {
        return Err(Error::KindMismatch { expected: objective.table_kind().as_str() });
    }
    Ok(())
}

pub fn kmeans_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::KMeans.cost(c, ds)
}

pub fn kmedian_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::KMedian.cost(c, ds)
}

pub fn kmedoids_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::KMedoids.cost(c, ds)
}

pub fn minsum_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::MinSum.cost(c, ds)
}

pub fn mindiameter_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::MinDiameter.cost(c, ds)
}

pub fn kcenter_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::KCenter.cost(c, ds)
}

pub fn ratiocut_cost(c: &Clustering, ds: &WeightedDataset) -> Result<CostValue> {
    Objective::RatioCut.cost(c, ds)
}

/// Evaluates one objective on raw label slices with reusable scratch space.
struct Evaluator<'a> {
    objective: Objective,
    ds: &'a WeightedDataset,
    sums: Vec<CompensatedSum>,
    mass: Vec<f64>,
    peak: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(objective: Objective, ds: &'a WeightedDataset, k: usize) -> Self {
        Self {
            objective,
            ds,
            sums: alloc::vec![CompensatedSum::new(); k],
            mass: alloc::vec![0.0; k],
            peak: alloc::vec![0.0; k],
        }
    }

    fn cost(&mut self, labels: &[usize]) -> f64 {
        match self.objective {
            Objective::KMeans => self.pairwise_over_mass(labels, true, true),
            Objective::MinSum => self.pairwise_over_mass(labels, false, false),
            Objective::KMedian => self.exemplar_sum(labels, false),
            Objective::KMedoids => self.exemplar_sum(labels, true),
            Objective::MinDiameter => self.diameter(labels),
            Objective::KCenter => self.radius(labels),
            Objective::RatioCut => self.ratio_cut(labels),
        }
    }

    fn reset(&mut self) {
        self.sums.iter_mut().for_each(|s| *s = CompensatedSum::new());
        self.mass.iter_mut().for_each(|m| *m = 0.0);
        self.peak.iter_mut().for_each(|p| *p = 0.0);
    }

    fn accumulate_mass(&mut self, labels: &[usize]) {
        for (x, &l) in labels.iter().enumerate() {
            self.mass[l] += self.ds.weight(x);
        }
    }

    /// `sum_i [sum_{x<y in C_i} f(d) w(x) w(y)] (/ w(C_i))`.
    fn pairwise_over_mass(&mut self, labels: &[usize], squared: bool, divide: bool) -> f64 {
        self.reset();
        let ds = self.ds;
        let n = labels.len();
        for x in 0..n {
            let wx = ds.weight(x);
            for y in (x + 1)..n {
                if labels[x] == labels[y] {
                    let d = ds.d(x, y);
                    let f = if squared { d * d } else { d };
                    self.sums[labels[x]].add(f * wx * ds.weight(y));
                }
            }
        }
        if divide {
            self.accumulate_mass(labels);
        }
        let mut total = CompensatedSum::new();
        for (i, s) in self.sums.iter().enumerate() {
            total.add(if divide { s.value() / self.mass[i] } else { s.value() });
        }
        total.value()
    }

    /// `sum_i min_{e in C_i} sum_{x in C_i} f(d(x,e)) w(x)`.
    fn exemplar_sum(&mut self, labels: &[usize], squared: bool) -> f64 {
        self.reset();
        let ds = self.ds;
        self.peak.iter_mut().for_each(|p| *p = f64::INFINITY);
        for (e, &le) in labels.iter().enumerate() {
            let mut s = CompensatedSum::new();
            for (x, &lx) in labels.iter().enumerate() {
                if lx == le {
                    let d = ds.d(x, e);
                    s.add(if squared { d * d } else { d } * ds.weight(x));
                }
            }
            let v = s.value();
            if v < self.peak[le] {
                self.peak[le] = v;
            }
        }
        self.peak.iter().copied().collect::<CompensatedSum>().value()
    }

    fn diameter(&mut self, labels: &[usize]) -> f64 {
        let ds = self.ds;
        let mut best = 0.0f64;
        for x in 0..labels.len() {
            for y in (x + 1)..labels.len() {
                if labels[x] == labels[y] {
                    best = best.max(ds.d(x, y));
                }
            }
        }
        best
    }

    fn radius(&mut self, labels: &[usize]) -> f64 {
        self.reset();
        let ds = self.ds;
        self.peak.iter_mut().for_each(|p| *p = f64::INFINITY);
        for (e, &le) in labels.iter().enumerate() {
            let r = labels
                .iter()
                .enumerate()
                .filter(|&(_, &lx)| lx == le)
                .map(|(x, _)| ds.d(x, e))
                .fold(0.0, f64::max);
            if r < self.peak[le] {
                self.peak[le] = r;
            }
        }
        self.peak.iter().copied().fold(0.0, f64::max)
    }

    /// `1/2 sum_i [sum_{x in C_i, y not in C_i} s(x,y) w(x) w(y)] / w(C_i)`.
    fn ratio_cut(&mut self, labels: &[usize]) -> f64 {
        self.reset();
        let ds = self.ds;
        let n = labels.len();
        for x in 0..n {
            let wx = ds.weight(x);
            for y in (x + 1)..n {
                if labels[x] != labels[y] {
                    // The pair crosses the boundary of both clusters.
                    let v = ds.d(x, y) * wx * ds.weight(y);
                    self.sums[labels[x]].add(v);
                    self.sums[labels[y]].add(v);
                }
            }
        }
        self.accumulate_mass(labels);
        let mut total = CompensatedSum::new();
        for (i, s) in self.sums.iter().enumerate() {
            total.add(s.value() / self.mass[i]);
        }
        0.5 * total.value()
    }
}

/// Exact minimizer over every `k`-partition.
///
/// Weights are rescaled to a maximum of 1 before evaluation; every objective's
/// argmin is invariant under scaling. Among costs tied within
/// [`TIE_TOLERANCE`] (relative) the solver prefers the partition that splits
/// the fewest pairs of duplicate elements, then the first in canonical order.
/// On duplicate-free data this is simply the first tied partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    pub max_n: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N }
    }
}

impl ExactSolver {
    pub fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    pub fn minimize(&self, ds: &WeightedDataset, spec: ObjectiveSpec) -> Result<Clustering> {
        check_kind(spec.objective, ds)?;
        let n = ds.n();
        let mut partitions = enumerate_partitions(n, spec.k, self.max_n)?;
        let scaled = ds.normalized();
        let duplicates = scaled.duplicate_labels();
        let mut eval = Evaluator::new(spec.objective, &scaled, spec.k);

        let mut costs: Vec<(f64, u32)> = Vec::new();
        while let Some(labels) = partitions.advance() {
            let splits = duplicates.as_deref().map_or(0, |dup| split_pairs(labels, dup));
            costs.push((eval.cost(labels), splits));
        }
        let min = costs.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let (best, _) = costs
            .iter()
            .enumerate()
            .filter(|(_, c)| within_rel(c.0, min, TIE_TOLERANCE))
            .min_by_key(|(i, c)| (c.1, *i))
            .expect("at least one partition exists when 1 < k < n");

        let mut partitions = enumerate_partitions(n, spec.k, self.max_n)?;
        for _ in 0..best {
            partitions.advance();
        }
        let labels = partitions.advance().expect("index within enumeration").to_vec();
        Ok(Clustering::from_rgs(labels, spec.k))
    }

    /// The minimizer together with its cost under the original weights.
    pub fn minimize_with_cost(&self, ds: &WeightedDataset, spec: ObjectiveSpec) -> Result<(Clustering, CostValue)> {
        let c = self.minimize(ds, spec)?;
        let cost = spec.objective.cost(&c, ds)?;
        Ok((c, cost))
    }
}

fn split_pairs(labels: &[usize], duplicates: &[usize]) -> u32 {
    let mut count = 0;
    for x in 0..labels.len() {
        for y in (x + 1)..labels.len() {
            if duplicates[x] == duplicates[y] && labels[x] != labels[y] {
                count += 1;
            }
        }
    }
    count
}

/// [`ExactSolver::minimize`] with the default enumeration cap.
pub fn exact_minimize(ds: &WeightedDataset, spec: ObjectiveSpec) -> Result<Clustering> {
    ExactSolver::default().minimize(ds, spec)
}

/// An exact partitional algorithm: an objective plus the solver that minimizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactPartitioner {
    pub objective: Objective,
    pub solver: ExactSolver,
}

impl ExactPartitioner {
    pub fn new(objective: Objective) -> Self {
        Self { objective, solver: ExactSolver::default() }
    }
}

impl Partitioner for ExactPartitioner {
    fn partition(&self, ds: &WeightedDataset, k: usize) -> Result<Clustering> {
        self.solver.minimize(ds, ObjectiveSpec::new(self.objective, k))
    }
}
