use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{log_uniform, AlgorithmHandle, AlgorithmOutput, ProbeConfig, Verdict, VerdictStatus, WeightFamily};
use crate::error::{Error, Result};
use crate::generate::lab_rng;
use crate::hierarchical::Linkage;
use crate::model::{Clustering, TableKind, WeightedDataset};
use crate::partitional::{ExactSolver, Objective};
use crate::structure::{is_nice, is_perfect, is_separation_uniform};

use super::HierarchicalMethod;

/// A weighting drawn from the probe's fixed candidate pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TrialKey {
    Unit,
    Single { x: usize, rung: usize },
    Pair { x1: usize, x2: usize, rung: usize },
    Triple { set: [usize; 3], rung: usize },
    Random(usize),
}

/// Outputs of one algorithm on one dataset under the candidate weightings,
/// computed on first use.
pub(crate) struct TrialPool<'a> {
    algorithm: AlgorithmHandle,
    dataset: &'a WeightedDataset,
    config: &'a ProbeConfig,
    solver: ExactSolver,
    random: Vec<Vec<f64>>,
    outputs: BTreeMap<TrialKey, AlgorithmOutput>,
}

impl<'a> TrialPool<'a> {
    pub(crate) fn new(algorithm: AlgorithmHandle, dataset: &'a WeightedDataset, config: &'a ProbeConfig) -> Self {
        let mut rng = lab_rng(config.seed);
        let random = (0..config.random_samples)
            .map(|_| log_uniform(dataset.n(), config.random_lo, config.random_hi, &mut rng))
            .collect();
        Self {
            algorithm,
            dataset,
            config,
            solver: ExactSolver::new(config.max_n),
            random,
            outputs: BTreeMap::new(),
        }
    }

    fn family(&self, key: TrialKey) -> WeightFamily {
        let ladder = &self.config.spike_ladder;
        match key {
            TrialKey::Unit => WeightFamily::Unit,
            TrialKey::Single { x, rung } => WeightFamily::Spike { set: alloc::vec![x], w: ladder[rung] },
            TrialKey::Pair { x1, x2, rung } => WeightFamily::PairSpike { x1, x2, w: ladder[rung] },
            TrialKey::Triple { set, rung } => WeightFamily::Spike { set: set.to_vec(), w: ladder[rung] },
            TrialKey::Random(i) => WeightFamily::Explicit(self.random[i].clone()),
        }
    }

    fn weights(&self, key: TrialKey) -> Vec<f64> {
        match key {
            TrialKey::Random(i) => self.random[i].clone(),
            other => self.family(other).weights(self.dataset.n()),
        }
    }

    fn output(&mut self, key: TrialKey) -> Result<&AlgorithmOutput> {
        if !self.outputs.contains_key(&key) {
            let out = run_weighted(self.algorithm, self.dataset, &self.weights(key), self.solver)?;
            self.outputs.insert(key, out);
        }
        Ok(&self.outputs[&key])
    }

    fn all_keys(&self) -> Vec<TrialKey> {
        let n = self.dataset.n();
        let rungs = self.config.spike_ladder.len();
        let mut keys = alloc::vec![TrialKey::Unit];
        keys.extend((0..self.random.len()).map(TrialKey::Random));
        for x in 0..n {
            keys.extend((0..rungs).map(|rung| TrialKey::Single { x, rung }));
        }
        for x1 in 0..n {
            for x2 in (x1 + 1)..n {
                keys.extend((0..rungs).map(|rung| TrialKey::Pair { x1, x2, rung }));
            }
        }
        keys
    }

    /// The removal search order for `c`: the constructions that provably
    /// break a clustering come first, then unit and random weightings.
    fn removal_order(&self, c: &Clustering) -> Vec<TrialKey> {
        let n = self.dataset.n();
        let rungs = self.config.spike_ladder.len();
        let singles = || (0..n).flat_map(move |x| (0..rungs).map(move |rung| TrialKey::Single { x, rung }));
        let pairs = |within: bool| {
            let mut out = Vec::new();
            for x1 in 0..n {
                for x2 in (x1 + 1)..n {
                    if c.same_cluster(x1, x2) == within {
                        out.extend((0..rungs).map(|rung| TrialKey::Pair { x1, x2, rung }));
                    }
                }
            }
            out
        };
        let mut order = Vec::new();
        if matches!(self.algorithm, AlgorithmHandle::Partitional { objective: Objective::RatioCut, .. }) {
            order.extend(singles());
            order.extend(pairs(true));
        } else {
            if self.dataset.kind() == TableKind::Distance {
                let witnesses = strict_non_nice_witnesses(c, self.dataset);
                let mut pairs: Vec<(usize, usize)> = witnesses.iter().map(|&(x1, x2, _)| (x1.min(x2), x1.max(x2))).collect();
                pairs.sort_unstable();
                pairs.dedup();
                for (x1, x2) in pairs {
                    order.extend((0..rungs).map(|rung| TrialKey::Pair { x1, x2, rung }));
                }
                // Spiking x3 as well pins the linkage from x1 to the cluster
                // holding x3, however that cluster has grown.
                let mut triples: Vec<[usize; 3]> = witnesses
                    .iter()
                    .map(|&(x1, x2, x3)| {
                        let mut set = [x1, x2, x3];
                        set.sort_unstable();
                        set
                    })
                    .collect();
                triples.sort_unstable();
                triples.dedup();
                for set in triples {
                    order.extend((0..rungs).map(|rung| TrialKey::Triple { set, rung }));
                }
            }
            order.extend(pairs(true));
            order.extend(singles());
        }
        order.push(TrialKey::Unit);
        order.extend((0..self.random.len()).map(TrialKey::Random));
        order.extend(pairs(false));
        let mut seen = alloc::collections::BTreeSet::new();
        order.retain(|k| seen.insert(*k));
        order
    }

    fn trial(&mut self, key: TrialKey, verdict: &mut Verdict) -> Result<&AlgorithmOutput> {
        verdict.trials += 1;
        if let Some(w) = self.family(key).spike() {
            verdict.max_w = verdict.max_w.max(w);
        }
        self.output(key)
    }

    pub(crate) fn range(&mut self) -> Result<BTreeMap<Clustering, RangeSample>> {
        let mut range = BTreeMap::new();
        for key in self.all_keys() {
            let clusterings = self.output(key)?.clusterings();
            for c in clusterings {
                range.entry(c).or_insert_with(|| RangeSample { weights: self.weights(key), family: self.family(key) });
            }
        }
        Ok(range)
    }

    pub(crate) fn responsiveness(&mut self, c: &Clustering, hint: Option<&[f64]>) -> Result<Verdict> {
        if c.n() != self.dataset.n() {
            return Err(Error::DimensionMismatch { what: "clustering", got: c.n(), expected: self.dataset.n() });
        }
        let budget = self.config.budget;
        let mut verdict = Verdict {
            clustering: c.clone(),
            status: VerdictStatus::Inconclusive,
            witness_produce: None,
            witness_remove: None,
            remove_family: None,
            trials: 0,
            max_w: 0.0,
        };
        if let Some(hint) = hint {
            verdict.trials += 1;
            if run_weighted(self.algorithm, self.dataset, hint, self.solver)?.outputs(c) {
                verdict.witness_produce = Some(hint.to_vec());
            }
        }
        if verdict.witness_produce.is_none() {
            for key in self.all_keys() {
                if verdict.trials >= budget {
                    break;
                }
                if self.trial(key, &mut verdict)?.outputs(c) {
                    verdict.witness_produce = Some(self.weights(key));
                    break;
                }
            }
        }
        for key in self.removal_order(c) {
            if verdict.trials >= budget {
                break;
            }
            if !self.trial(key, &mut verdict)?.outputs(c) {
                verdict.witness_remove = Some(self.weights(key));
                verdict.remove_family = Some(self.family(key));
                break;
            }
        }
        if verdict.witness_produce.is_some() && verdict.witness_remove.is_some() {
            verdict.status = VerdictStatus::Responsive;
        }
        Ok(verdict)
    }
}

/// For every ordered within-cluster pair `(x1, x2)` that has one, the first
/// `x3` outside the cluster with `d(x1, x2) > d(x1, x3)`.
fn strict_non_nice_witnesses(c: &Clustering, ds: &WeightedDataset) -> Vec<(usize, usize, usize)> {
    let n = c.n();
    let mut out = Vec::new();
    for x1 in 0..n {
        for x2 in (0..n).filter(|&y| y != x1 && c.same_cluster(x1, y)) {
            if let Some(x3) = (0..n).find(|&y| !c.same_cluster(x1, y) && ds.d(x1, x2) > ds.d(x1, y)) {
                out.push((x1, x2, x3));
            }
        }
    }
    out
}

fn run_weighted(a: AlgorithmHandle, ds: &WeightedDataset, weights: &[f64], solver: ExactSolver) -> Result<AlgorithmOutput> {
    a.run(&ds.reweighted(weights.to_vec())?, solver)
}

/// A clustering in the estimated range, with a weighting that produces it.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSample {
    pub weights: Vec<f64>,
    pub family: WeightFamily,
}

/// Outcome of a separability probe.
#[derive(Debug, Clone, PartialEq)]
pub struct Separability {
    pub separated: bool,
    /// The first spike height that separates the set.
    pub w: Option<f64>,
    pub max_w: f64,
    /// The clustering produced at `w`.
    pub clustering: Option<Clustering>,
}

/// Runs witness searches under a fixed configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Prober {
    pub config: ProbeConfig,
}

impl Prober {
    pub fn new(config: ProbeConfig) -> Self {
        Self { config }
    }

    pub fn solver(&self) -> ExactSolver {
        ExactSolver::new(self.config.max_n)
    }

    pub(crate) fn pool<'a>(&'a self, a: AlgorithmHandle, ds: &'a WeightedDataset) -> TrialPool<'a> {
        TrialPool::new(a, ds, &self.config)
    }

    pub fn run(&self, a: &AlgorithmHandle, ds: &WeightedDataset) -> Result<AlgorithmOutput> {
        a.run(ds, self.solver())
    }

    /// Distinct clusterings output under unit weights, the random samples and
    /// every single and pair spike on the ladder, each with the first
    /// weighting that produced it. A lower bound on the true range.
    pub fn range_estimate(&self, a: &AlgorithmHandle, ds: &WeightedDataset) -> Result<BTreeMap<Clustering, RangeSample>> {
        check_input(a, ds)?;
        self.pool(*a, ds).range()
    }

    /// Searches for a weighting that makes `a` output `c` and one that makes
    /// it not output `c`. Partitional algorithms run with `k = |c|`.
    pub fn responsiveness(
        &self,
        a: &AlgorithmHandle,
        ds: &WeightedDataset,
        c: &Clustering,
        hint: Option<&[f64]>,
    ) -> Result<Verdict> {
        let a = a.with_k(c.k());
        check_input(&a, ds)?;
        self.pool(a, ds).responsiveness(c, hint)
    }

    /// Whether a theorem guarantees that no weighting changes whether `a`
    /// outputs `c`: weight-free algorithms, average linkage on nice
    /// clusterings, and ratio-cut on perfect, separation-uniform clusterings.
    pub fn certificate(&self, a: &AlgorithmHandle, ds: &WeightedDataset, c: &Clustering) -> Result<bool> {
        if a.is_weight_free() {
            return Ok(true);
        }
        match a {
            AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(Linkage::Average)) => {
                Ok(!c.has_singleton() && is_nice(c, ds, 0.0)?.holds)
            }
            AlgorithmHandle::Partitional { objective: Objective::RatioCut, .. } => Ok(!c.has_singleton()
                && is_perfect(c, ds, 0.0)?.holds
                && is_separation_uniform(c, ds, 0.0)?.detection.holds),
            _ => Ok(false),
        }
    }

    /// Climbs the spike ladder on `s` until the `k`-clustering output by `a`
    /// puts every element of `s` in a different cluster.
    pub fn separability(&self, a: &AlgorithmHandle, ds: &WeightedDataset, s: &[usize], k: usize) -> Result<Separability> {
        if !a.is_partitional() {
            return Err(Error::UnsupportedInput { algorithm: a.name(), reason: "separability needs a partitional algorithm" });
        }
        if s.len() < 2 || s.len() > k || k >= ds.n() || s.iter().any(|&x| x >= ds.n()) {
            return Err(Error::InvalidClustering(alloc::format!(
                "separability needs 2 <= |S| <= k < n with S inside 0..n, got |S|={} k={k} n={}",
                s.len(),
                ds.n()
            )));
        }
        let a = a.with_k(k);
        let mut max_w: f64 = 0.0;
        for &w in &self.config.spike_ladder {
            max_w = max_w.max(w);
            let weights = WeightFamily::Spike { set: s.to_vec(), w }.weights(ds.n());
            let AlgorithmOutput::Flat(c) = run_weighted(a, ds, &weights, self.solver())? else {
                unreachable!("partitional algorithms produce flat clusterings")
            };
            let separated = s.iter().enumerate().all(|(i, &x)| s[i + 1..].iter().all(|&y| !c.same_cluster(x, y)));
            if separated {
                return Ok(Separability { separated: true, w: Some(w), max_w, clustering: Some(c) });
            }
        }
        Ok(Separability { separated: false, w: None, max_w, clustering: None })
    }
}

pub(crate) fn check_input(a: &AlgorithmHandle, ds: &WeightedDataset) -> Result<()> {
    if ds.kind() != a.table_kind() {
        return Err(Error::KindMismatch { expected: a.table_kind().as_str() });
    }
    if a.requires_coords() && ds.coords().is_none() {
        return Err(Error::MissingCoords);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::GeneratorSpec;
    use crate::model::PairTable;

    fn line(points: &[f64]) -> WeightedDataset {
        WeightedDataset::from_coords(points.iter().map(|&p| alloc::vec![p]).collect(), alloc::vec![1.0; points.len()])
            .unwrap()
    }

    fn kmeans(k: usize) -> AlgorithmHandle {
        AlgorithmHandle::Partitional { objective: Objective::KMeans, k }
    }

    fn linkage(l: Linkage) -> AlgorithmHandle {
        AlgorithmHandle::Hierarchical(HierarchicalMethod::Linkage(l))
    }

    #[test]
    fn kmeans_runs_on_line() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let out = Prober::default().run(&kmeans(2), &ds).unwrap();
        assert_eq!(out, AlgorithmOutput::Flat(Clustering::from_labels(&[0, 0, 1, 1]).unwrap()));
    }

    #[test]
    fn kmeans_range_contains_spiked_clusterings() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let range = Prober::default().range_estimate(&kmeans(2), &ds).unwrap();
        assert!(range.len() >= 3);
        for labels in [[0, 0, 1, 1], [0, 1, 1, 1], [0, 0, 0, 1]] {
            assert!(range.contains_key(&Clustering::from_labels(&labels).unwrap()), "{labels:?}");
        }
        for (c, sample) in &range {
            let AlgorithmOutput::Flat(out) = Prober::default().run(&kmeans(2), &ds.reweighted(sample.weights.clone()).unwrap()).unwrap() else {
                panic!()
            };
            assert_eq!(&out, c);
        }
    }

    #[test]
    fn single_linkage_range_is_one_dendrogram() {
        let ds = line(&[0.0, 1.0, 3.0, 7.0, 15.0]);
        let prober = Prober::default();
        let a = linkage(Linkage::Single);
        let range: Vec<Clustering> = prober.range_estimate(&a, &ds).unwrap().into_keys().collect();
        let AlgorithmOutput::Tree(d) = prober.run(&a, &ds).unwrap() else { panic!() };
        assert_eq!(range, d.clusterings());
    }

    #[test]
    fn kmeans_is_responsive_on_its_unit_output() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let c = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        let prober = Prober::default();
        let v = prober.responsiveness(&kmeans(2), &ds, &c, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Responsive);
        assert!(v.replay(&kmeans(2), &ds, prober.solver()).unwrap());
        assert!(!prober.certificate(&kmeans(2), &ds, &c).unwrap());
    }

    #[test]
    fn single_linkage_search_is_inconclusive_but_certified() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let c = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        let prober = Prober::default();
        let a = linkage(Linkage::Single);
        let v = prober.responsiveness(&a, &ds, &c, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        assert!(v.witness_produce.is_some());
        assert!(v.witness_remove.is_none());
        assert!(prober.certificate(&a, &ds, &c).unwrap());
    }

    #[test]
    fn budget_bounds_trials() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let c = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        let prober = Prober::new(ProbeConfig { budget: 5, ..ProbeConfig::default() });
        let v = prober.responsiveness(&linkage(Linkage::Complete), &ds, &c, None).unwrap();
        assert_eq!(v.trials, 5);
        assert_eq!(v.status, VerdictStatus::Inconclusive);
    }

    #[test]
    fn average_linkage_non_nice_is_removed_by_a_pair_spike() {
        // {0,1,2} is not nice since d(2,0)=7 > d(2,3)=3, yet a heavy 1 makes it a cluster.
        let ds = line(&[0.0, 4.0, 7.0, 10.0, 11.0]);
        let c = Clustering::from_labels(&[0, 0, 0, 1, 1]).unwrap();
        let prober = Prober::default();
        let a = linkage(Linkage::Average);
        assert!(!prober.certificate(&a, &ds, &c).unwrap());
        let v = prober.responsiveness(&a, &ds, &c, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Responsive);
        assert!(matches!(v.remove_family, Some(WeightFamily::PairSpike { .. })));
        assert!(v.replay(&a, &ds, prober.solver()).unwrap());
    }

    #[test]
    fn average_linkage_nice_is_certified() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0, 12.0]);
        let c = Clustering::from_labels(&[0, 0, 1, 1, 1]).unwrap();
        let prober = Prober::default();
        let a = linkage(Linkage::Average);
        assert!(prober.certificate(&a, &ds, &c).unwrap());
        assert_ne!(prober.responsiveness(&a, &ds, &c, None).unwrap().status, VerdictStatus::Responsive);
    }

    #[test]
    fn ratiocut_two_cross_levels_is_responsive() {
        let rows = alloc::vec![
            alloc::vec![0.0, 5.0, 1.0, 2.0],
            alloc::vec![5.0, 0.0, 1.0, 1.0],
            alloc::vec![1.0, 1.0, 0.0, 5.0],
            alloc::vec![2.0, 1.0, 5.0, 0.0],
        ];
        let table = PairTable::from_rows(TableKind::Similarity, &rows).unwrap();
        let ds = WeightedDataset::unweighted(table).unwrap();
        let c = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        let a = AlgorithmHandle::Partitional { objective: Objective::RatioCut, k: 2 };
        let prober = Prober::default();
        assert!(!prober.certificate(&a, &ds, &c).unwrap());
        let v = prober.responsiveness(&a, &ds, &c, None).unwrap();
        assert_eq!(v.status, VerdictStatus::Responsive);
    }

    #[test]
    fn ratiocut_perfect_uniform_range_is_planted() {
        let mut rng = lab_rng(3);
        let g = GeneratorSpec::PerfectUniform { n: 6, k: 2, within_lo: 4.0, within_hi: 6.0, lambda: 1.0 }
            .generate(&mut rng)
            .unwrap();
        let a = AlgorithmHandle::Partitional { objective: Objective::RatioCut, k: 2 };
        let range: Vec<Clustering> = Prober::default().range_estimate(&a, &g.dataset).unwrap().into_keys().collect();
        assert_eq!(range, [g.planted.unwrap()]);
    }

    #[test]
    fn separability_examples() {
        let ds = line(&[0.0, 1.0, 10.0, 11.0]);
        let prober = Prober::default();
        let s = prober.separability(&kmeans(2), &ds, &[0, 2], 2).unwrap();
        assert!(s.separated);
        assert_eq!(s.w, Some(1e2));
        let minsum = AlgorithmHandle::Partitional { objective: Objective::MinSum, k: 2 };
        assert!(prober.separability(&minsum, &ds, &[2, 3], 2).unwrap().separated);
        let md = AlgorithmHandle::Partitional { objective: Objective::MinDiameter, k: 2 };
        let s = prober.separability(&md, &ds, &[0, 1], 2).unwrap();
        assert!(!s.separated);
        assert_eq!(s.max_w, 1e9);
        assert!(prober.separability(&md, &ds, &[0], 2).is_err());
    }
}
