use std::path::Path;

use clusterlab_core::generate::{lab_rng, GeneratorSpec};
use clusterlab_core::structure::report;
use clusterlab_core::{
    AlgorithmHandle, AlgorithmOutput, CategoryReport, Clustering, ExactSolver, ProbeConfig, Prober, TableKind,
    VerdictStatus, WeightedDataset,
};
use rayon::prelude::*;

use crate::config::{family_name, ExperimentConfig};
use crate::error::Result;
use crate::format::LoadedDataset;
use crate::report::{ClassifyReport, ProbeReport, RunReport, StructureDto};

/// Draws one dataset from `spec` with the lab generator seeded by `seed`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<LoadedDataset> {
    let g = spec.generate(&mut lab_rng(seed))?;
    Ok(LoadedDataset { dataset: g.dataset, planted: g.planted })
}

pub fn run(loaded: &LoadedDataset, a: &AlgorithmHandle, max_n: usize) -> Result<RunReport> {
    let ds = &loaded.dataset;
    let out = a.run(ds, ExactSolver::new(max_n))?;
    Ok(match (out, a) {
        (AlgorithmOutput::Flat(c), AlgorithmHandle::Partitional { objective, k }) => RunReport::Flat {
            algorithm: a.name(),
            k: *k,
            labels: c.labels().to_vec(),
            clusters: c.to_string(),
            cost: objective.cost(&c, ds)?.value,
            structure: StructureDto::from(&report(&c, ds)?),
        },
        (AlgorithmOutput::Tree(d), _) => RunReport::Tree {
            algorithm: a.name(),
            newick: d.to_newick(),
            heights: d.merge_heights(),
            planted_output: loaded.planted.as_ref().map(|c| d.outputs(c)),
            planted_structure: loaded.planted.as_ref().map(|c| report(c, ds)).transpose()?.as_ref().map(StructureDto::from),
        },
        (AlgorithmOutput::Flat(_), _) => unreachable!("hierarchical algorithms produce dendrograms"),
    })
}

pub fn probe(
    ds: &WeightedDataset,
    a: &AlgorithmHandle,
    c: &Clustering,
    config: ProbeConfig,
) -> Result<ProbeReport> {
    let prober = Prober::new(config);
    let a = a.with_k(c.k());
    let mut verdict = prober.responsiveness(&a, ds, c, None)?;
    let certificate = prober.certificate(&a, ds, c)?;
    if certificate {
        if verdict.status == VerdictStatus::Responsive {
            return Err(clusterlab_core::Error::Inconsistency(format!("{a}: {c} is certified robust but responsive")).into());
        }
        verdict.status = VerdictStatus::RobustOnClustering;
    }
    Ok(ProbeReport::new(&a, &verdict, certificate))
}

/// Classifies every configured algorithm over the datasets of its table kind.
/// Algorithms run in parallel; the report keeps config order.
pub fn classify(config: &ExperimentConfig, base: &Path) -> Result<ClassifyReport> {
    config.validate()?;
    let handles = config.handles()?;
    let datasets = config.datasets(base)?;
    let prober = Prober::new(config.probe_config());
    let reports = handles
        .par_iter()
        .map(|a| classify_one(&prober, a, &datasets, &config.ks))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassifyReport {
        seed: config.seed,
        budget: config.budget,
        ks: config.ks.clone(),
        datasets: datasets.iter().map(|d| d.name.clone()).collect(),
        reports,
    })
}

fn classify_one(
    prober: &Prober,
    a: &AlgorithmHandle,
    datasets: &[crate::config::NamedDataset],
    ks: &[usize],
) -> Result<CategoryReport> {
    let kind: TableKind = a.table_kind();
    let jobs: Vec<(usize, AlgorithmHandle)> = datasets
        .iter()
        .enumerate()
        .filter(|(_, d)| d.dataset.kind() == kind)
        .flat_map(|(i, _)| {
            let ks: Vec<AlgorithmHandle> =
                if a.is_partitional() { ks.iter().map(|&k| a.with_k(k)).collect() } else { vec![*a] };
            ks.into_iter().map(move |h| (i, h))
        })
        .collect();
    let evidence = jobs
        .par_iter()
        .map(|(i, h)| prober.probe_dataset(h, &datasets[*i].dataset, *i))
        .collect::<clusterlab_core::Result<Vec<_>>>()?;
    Ok(CategoryReport::from_evidence(*a, family_name(kind), evidence))
}
