//! Human-readable tables and machine-readable records (one JSON object per line).

use std::fmt::Write;

use clusterlab_core::structure::StructureReport;
use clusterlab_core::{
    AlgorithmHandle, Category, CategoryReport, Detection, Verdict, VerdictStatus, Witness,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Records,
}

fn record<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&serde_json::to_string(value).expect("records serialize"));
    out.push('\n');
}

fn mode(a: &AlgorithmHandle) -> &'static str {
    if a.is_partitional() {
        "partitional"
    } else {
        "hierarchical"
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Perfect { within, cross } => format!("within {within:?} vs cross {cross:?}"),
        Witness::Uniform { low, high } => format!("cross {low:?} below cross {high:?}"),
        Witness::Nice { x1, x2, x3 } => format!("d({x1},{x2}) >= d({x1},{x3})"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionDto {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&Detection> for DetectionDto {
    fn from(d: &Detection) -> Self {
        Self { holds: d.holds, witness: d.witness.as_ref().map(witness_text) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfect: Option<DetectionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_uniform: Option<DetectionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nice: Option<DetectionDto>,
}

impl From<&StructureReport> for StructureDto {
    fn from(r: &StructureReport) -> Self {
        Self {
            perfect: r.perfect.as_ref().map(Into::into),
            separation_uniform: r.separation_uniform.as_ref().map(Into::into),
            lambda: r.lambda,
            nice: r.nice.as_ref().map(Into::into),
        }
    }
}

impl StructureDto {
    fn summary(&self) -> String {
        let mut parts = Vec::new();
        let flag = |name: &str, d: &DetectionDto| match &d.witness {
            None => format!("{name}=yes"),
            Some(w) => format!("{name}=no ({w})"),
        };
        if let Some(d) = &self.perfect {
            parts.push(flag("perfect", d));
        }
        if let Some(d) = &self.separation_uniform {
            parts.push(flag("separation-uniform", d));
        }
        if let Some(l) = self.lambda {
            parts.push(format!("lambda={l}"));
        }
        if let Some(d) = &self.nice {
            parts.push(flag("nice", d));
        }
        parts.join(", ")
    }
}

/// Result of `run`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "output")]
pub enum RunReport {
    #[serde(rename = "clustering", rename_all = "camelCase")]
    Flat {
        algorithm: String,
        k: usize,
        labels: Vec<usize>,
        clusters: String,
        cost: f64,
        structure: StructureDto,
    },
    #[serde(rename = "dendrogram", rename_all = "camelCase")]
    Tree {
        algorithm: String,
        newick: String,
        heights: Vec<Option<f64>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        planted_output: Option<bool>,
        #[serde(skip_serializing_if = "Option::is_none")]
        planted_structure: Option<StructureDto>,
    },
}

impl RunReport {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Records => record(&mut out, self),
            Format::Table => match self {
                RunReport::Flat { algorithm, k, clusters, cost, structure, .. } => {
                    let _ = writeln!(out, "algorithm  {algorithm} (k={k})");
                    let _ = writeln!(out, "clustering {clusters}");
                    let _ = writeln!(out, "cost       {cost}");
                    let _ = writeln!(out, "structure  {}", structure.summary());
                }
                RunReport::Tree { algorithm, newick, planted_output, planted_structure, .. } => {
                    let _ = writeln!(out, "algorithm  {algorithm}");
                    let _ = writeln!(out, "dendrogram {newick}");
                    if let Some(p) = planted_output {
                        let _ = writeln!(out, "planted    {}", if *p { "output" } else { "not output" });
                    }
                    if let Some(s) = planted_structure {
                        let _ = writeln!(out, "structure  {}", s.summary());
                    }
                }
            },
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictDto {
    pub clustering: String,
    pub status: &'static str,
    pub trials: usize,
    pub max_w: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remove_family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_produce: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_remove: Option<Vec<f64>>,
}

impl VerdictDto {
    pub fn new(v: &Verdict, with_weights: bool) -> Self {
        Self {
            clustering: v.clustering.to_string(),
            status: v.status.as_str(),
            trials: v.trials,
            max_w: v.max_w,
            remove_family: v.remove_family.as_ref().map(ToString::to_string),
            witness_produce: v.witness_produce.clone().filter(|_| with_weights),
            witness_remove: v.witness_remove.clone().filter(|_| with_weights),
        }
    }
}

/// Result of `probe`: one verdict plus the certificate check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub algorithm: String,
    pub verdict: VerdictDto,
    pub certificate: bool,
}

impl ProbeReport {
    pub fn new(a: &AlgorithmHandle, verdict: &Verdict, certificate: bool) -> Self {
        Self { algorithm: a.name(), verdict: VerdictDto::new(verdict, true), certificate }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Records => record(&mut out, self),
            Format::Table => {
                let v = &self.verdict;
                let _ = writeln!(out, "algorithm   {}", self.algorithm);
                let _ = writeln!(out, "clustering  {}", v.clustering);
                let _ = writeln!(out, "status      {}", v.status);
                let _ = writeln!(out, "certificate {}", if self.certificate { "yes" } else { "no" });
                let _ = writeln!(out, "trials      {} (largest spike {:e})", v.trials, v.max_w);
                if let Some(f) = &v.remove_family {
                    let _ = writeln!(out, "removed by  {f}");
                }
            }
        }
        out
    }
}

/// Result of `classify`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyReport {
    pub seed: u64,
    pub budget: usize,
    pub ks: Vec<usize>,
    pub datasets: Vec<String>,
    pub reports: Vec<CategoryReport>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CampaignRecord<'a> {
    record: &'static str,
    seed: u64,
    budget: usize,
    ks: &'a [usize],
    datasets: &'a [String],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CategoryRecord<'a> {
    record: &'static str,
    algorithm: String,
    mode: &'static str,
    family: &'a str,
    category: &'static str,
    responsive: usize,
    certified: usize,
    inconclusive: usize,
    skipped_singleton: usize,
    skipped_datasets: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerdictRecord<'a> {
    record: &'static str,
    algorithm: String,
    dataset: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(flatten)]
    verdict: VerdictDto,
}

#[derive(Serialize, Default)]
struct GridCell {
    partitional: Vec<String>,
    hierarchical: Vec<String>,
}

#[derive(Serialize, Default)]
struct GridRecord {
    record: &'static str,
    sensitive: GridCell,
    considering: GridCell,
    robust: GridCell,
    undetermined: GridCell,
}

const CATEGORIES: [Category; 4] = [Category::Sensitive, Category::Considering, Category::Robust, Category::Undetermined];

impl ClassifyReport {
    /// Algorithm names per category and mode, in report order.
    pub fn grid(&self) -> Vec<(Category, Vec<String>, Vec<String>)> {
        CATEGORIES
            .iter()
            .map(|&cat| {
                let pick = |partitional: bool| {
                    self.reports
                        .iter()
                        .filter(|r| r.category == cat && r.algorithm.is_partitional() == partitional)
                        .map(|r| r.algorithm.name())
                        .collect::<Vec<_>>()
                };
                (cat, pick(true), pick(false))
            })
            .collect()
    }

    pub fn category_of(&self, name: &str) -> Option<Category> {
        self.reports.iter().find(|r| r.algorithm.name() == name).map(|r| r.category)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Records => self.records(),
            Format::Table => self.table(),
        }
    }

    fn records(&self) -> String {
        let mut out = String::new();
        record(
            &mut out,
            &CampaignRecord { record: "campaign", seed: self.seed, budget: self.budget, ks: &self.ks, datasets: &self.datasets },
        );
        for r in &self.reports {
            record(
                &mut out,
                &CategoryRecord {
                    record: "category",
                    algorithm: r.algorithm.name(),
                    mode: mode(&r.algorithm),
                    family: &r.family,
                    category: r.category.as_str(),
                    responsive: r.counts.responsive,
                    certified: r.counts.certified,
                    inconclusive: r.counts.inconclusive,
                    skipped_singleton: r.counts.skipped_singleton,
                    skipped_datasets: r.counts.skipped_datasets,
                },
            );
            for e in &r.evidence {
                for v in &e.verdicts {
                    record(
                        &mut out,
                        &VerdictRecord {
                            record: "verdict",
                            algorithm: r.algorithm.name(),
                            dataset: &self.datasets[e.dataset],
                            k: e.k,
                            verdict: VerdictDto::new(v, false),
                        },
                    );
                }
            }
        }
        let mut grid = GridRecord { record: "grid", ..GridRecord::default() };
        for (cat, partitional, hierarchical) in self.grid() {
            let cell = GridCell { partitional, hierarchical };
            match cat {
                Category::Sensitive => grid.sensitive = cell,
                Category::Considering => grid.considering = cell,
                Category::Robust => grid.robust = cell,
                Category::Undetermined => grid.undetermined = cell,
            }
        }
        record(&mut out, &grid);
        out
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Weight-response classification");
        let _ = writeln!(
            out,
            "Categories are empirical evidence over {} sampled datasets (seed {}, budget {}, k in {:?}), not proofs over all data.",
            self.datasets.len(),
            self.seed,
            self.budget,
            self.ks
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<14}{:<44}hierarchical", "", "partitional");
        for (cat, partitional, hierarchical) in self.grid() {
            if cat == Category::Undetermined && partitional.is_empty() && hierarchical.is_empty() {
                continue;
            }
            let cell = |v: &Vec<String>| if v.is_empty() { "-".to_string() } else { v.join(", ") };
            let _ = writeln!(out, "{:<14}{:<44}{}", cat.as_str(), cell(&partitional), cell(&hierarchical));
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<18}{:<12}{:<14}{:>11}{:>10}{:>13}{:>9}",
            "algorithm", "family", "category", "responsive", "certified", "inconclusive", "skipped"
        );
        for r in &self.reports {
            let c = &r.counts;
            let _ = writeln!(
                out,
                "{:<18}{:<12}{:<14}{:>11}{:>10}{:>13}{:>9}",
                r.algorithm.name(),
                r.family,
                r.category.as_str(),
                c.responsive,
                c.certified,
                c.inconclusive,
                c.skipped_singleton + c.skipped_datasets
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "Witness samples");
        for r in &self.reports {
            let sample = r.evidence.iter().find_map(|e| {
                e.verdicts.iter().find(|v| v.status == VerdictStatus::Responsive).map(|v| (e.dataset, v))
            });
            match sample {
                Some((d, v)) => {
                    let family = v.remove_family.as_ref().map(ToString::to_string).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "  {:<18}{} on {} removed by {}",
                        r.algorithm.name(),
                        v.clustering,
                        self.datasets[d],
                        family
                    );
                }
                None => {
                    let certified = r.verdicts().find(|v| v.status == VerdictStatus::RobustOnClustering);
                    let text = certified.map_or("no responsive or certified clustering".to_string(), |v| {
                        format!("{} certified robust", v.clustering)
                    });
                    let _ = writeln!(out, "  {:<18}{}", r.algorithm.name(), text);
                }
            }
        }
        out
    }
}
