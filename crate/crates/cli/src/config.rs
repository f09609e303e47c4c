use std::path::{Path, PathBuf};

use clusterlab_core::generate::{lab_rng, GeneratorSpec};
use clusterlab_core::{AlgorithmHandle, Clustering, ProbeConfig, TableKind, WeightedDataset, DEFAULT_MAX_N};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::{read_dataset, KindDto};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", rename_all_fields = "camelCase", deny_unknown_fields)]
pub enum GeneratorConfig {
    PerfectUniform {
        n: usize,
        k: usize,
        within_lo: f64,
        within_hi: f64,
        lambda: f64,
        #[serde(default = "one")]
        count: usize,
    },
    NiceBlocks {
        n: usize,
        k: usize,
        gap: f64,
        #[serde(default = "one")]
        count: usize,
    },
    GenericRandom {
        n: usize,
        kind: KindDto,
        #[serde(default = "one")]
        count: usize,
    },
    Line { positions: Vec<f64> },
    /// A dataset file, relative to the config file.
    Custom { path: PathBuf },
}

fn one() -> usize {
    1
}

impl GeneratorConfig {
    fn spec(&self) -> Option<(GeneratorSpec, usize)> {
        Some(match self {
            GeneratorConfig::PerfectUniform { n, k, within_lo, within_hi, lambda, count } => (
                GeneratorSpec::PerfectUniform {
                    n: *n,
                    k: *k,
                    within_lo: *within_lo,
                    within_hi: *within_hi,
                    lambda: *lambda,
                },
                *count,
            ),
            GeneratorConfig::NiceBlocks { n, k, gap, count } => {
                (GeneratorSpec::NiceBlocks { n: *n, k: *k, gap: *gap }, *count)
            }
            GeneratorConfig::GenericRandom { n, kind, count } => {
                (GeneratorSpec::GenericRandom { n: *n, kind: (*kind).into() }, *count)
            }
            GeneratorConfig::Line { positions } => (GeneratorSpec::Line { positions: positions.clone() }, 1),
            GeneratorConfig::Custom { .. } => return None,
        })
    }

    fn n(&self) -> Option<usize> {
        match self {
            GeneratorConfig::PerfectUniform { n, .. }
            | GeneratorConfig::NiceBlocks { n, .. }
            | GeneratorConfig::GenericRandom { n, .. } => Some(*n),
            GeneratorConfig::Line { positions } => Some(positions.len()),
            GeneratorConfig::Custom { .. } => None,
        }
    }
}

/// A classification campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithms: Vec<String>,
    pub generators: Vec<GeneratorConfig>,
    /// Seeds both dataset generation and the probe's random weightings.
    pub seed: u64,
    /// Algorithm runs per probed clustering.
    pub budget: usize,
    /// Cluster counts for partitional algorithms.
    pub ks: Vec<usize>,
    #[serde(default = "default_samples")]
    pub random_samples: usize,
    #[serde(default)]
    pub max_n: Option<usize>,
}

fn default_samples() -> usize {
    100
}

impl Default for ExperimentConfig {
    /// The twelve-algorithm grid over mixed distance and similarity families.
    fn default() -> Self {
        use GeneratorConfig::*;
        Self {
            algorithms: AlgorithmHandle::catalog().iter().map(AlgorithmHandle::name).collect(),
            generators: vec![
                NiceBlocks { n: 6, k: 2, gap: 2.0, count: 1 },
                NiceBlocks { n: 7, k: 3, gap: 2.0, count: 1 },
                GenericRandom { n: 6, kind: KindDto::Distance, count: 1 },
                GenericRandom { n: 7, kind: KindDto::Distance, count: 1 },
                Line { positions: vec![0.0, 1.0, 3.0, 7.0, 15.0, 31.0] },
                PerfectUniform { n: 6, k: 2, within_lo: 4.0, within_hi: 6.0, lambda: 1.0, count: 1 },
                PerfectUniform { n: 6, k: 3, within_lo: 4.0, within_hi: 6.0, lambda: 1.0, count: 1 },
                GenericRandom { n: 6, kind: KindDto::Similarity, count: 1 },
                GenericRandom { n: 7, kind: KindDto::Similarity, count: 1 },
            ],
            seed: 0,
            budget: 2000,
            ks: vec![2, 3],
            random_samples: 100,
            max_n: None,
        }
    }
}

/// A dataset drawn for a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedDataset {
    pub name: String,
    pub dataset: WeightedDataset,
    pub planted: Option<Clustering>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
    }

    pub fn max_n(&self) -> usize {
        self.max_n.unwrap_or(DEFAULT_MAX_N)
    }

    pub fn handles(&self) -> Result<Vec<AlgorithmHandle>> {
        self.algorithms.iter().map(|name| Ok(AlgorithmHandle::parse(name, None)?)).collect()
    }

    pub fn probe_config(&self) -> ProbeConfig {
        ProbeConfig {
            seed: self.seed,
            budget: self.budget,
            random_samples: self.random_samples,
            max_n: self.max_n(),
            ..ProbeConfig::default()
        }
    }

    /// Rejects configs whose datasets would exceed the enumeration cap.
    pub fn validate(&self) -> Result<()> {
        self.handles()?;
        if self.ks.iter().any(|&k| k < 2) {
            return Err(CliError::Usage("every k must be at least 2".into()));
        }
        for g in &self.generators {
            if let Some(n) = g.n() {
                if n > self.max_n() {
                    return Err(CliError::Usage(format!("generator with n={n} exceeds the enumeration cap {}", self.max_n())));
                }
            }
        }
        Ok(())
    }

    /// Draws every dataset in order from one generator seeded with `seed`.
    /// Custom paths resolve against `base`.
    pub fn datasets(&self, base: &Path) -> Result<Vec<NamedDataset>> {
        let mut rng = lab_rng(self.seed);
        let mut out = Vec::new();
        for g in &self.generators {
            match g.spec() {
                Some((spec, count)) => {
                    for i in 0..count {
                        let generated = spec.generate(&mut rng)?;
                        let name = if count > 1 { format!("{}#{i}", spec.name()) } else { spec.name() };
                        out.push(NamedDataset { name, dataset: generated.dataset, planted: generated.planted });
                    }
                }
                None => {
                    let GeneratorConfig::Custom { path } = g else { unreachable!() };
                    let full = base.join(path);
                    let loaded = read_dataset(&full)?;
                    if loaded.dataset.n() > self.max_n() {
                        return Err(CliError::Usage(format!(
                            "{} has n={} above the enumeration cap {}",
                            full.display(),
                            loaded.dataset.n(),
                            self.max_n()
                        )));
                    }
                    out.push(NamedDataset { name: path.display().to_string(), dataset: loaded.dataset, planted: loaded.planted });
                }
            }
        }
        Ok(out)
    }
}

pub fn family_name(kind: TableKind) -> &'static str {
    match kind {
        TableKind::Distance => "distance",
        TableKind::Similarity => "similarity",
    }
}
