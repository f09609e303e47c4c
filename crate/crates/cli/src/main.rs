use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clusterlab::commands;
use clusterlab::format::{read_dataset, to_json};
use clusterlab::io::emit;
use clusterlab::{CliError, ExperimentConfig, Format, Result};
use clusterlab_core::generate::GeneratorSpec;
use clusterlab_core::{AlgorithmHandle, Clustering, ProbeConfig, TableKind, DEFAULT_MAX_N};

/// Exact clustering of weighted data and weight-response probing.
#[derive(Parser)]
#[command(name = "clusterlab", version)]
struct Cli {
    /// Largest dataset the exact solvers will enumerate.
    #[arg(long, global = true, env = "CLUSTERLAB_MAX_N")]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated dataset file.
    Generate {
        #[command(subcommand)]
        generator: Generator,
        #[arg(long, default_value_t = 0, global = true)]
        seed: u64,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on a dataset file.
    Run {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        algorithm: String,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Search for witness weightings on one clustering.
    Probe {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        algorithm: String,
        /// Comma-separated cluster labels; defaults to the planted clustering.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Classify algorithms as weight-sensitive, -considering or -robust.
    Classify {
        /// Experiment config (JSON); the built-in twelve-algorithm campaign when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand)]
enum Generator {
    /// Similarity blocks with every cross-block value equal to lambda.
    PerfectUniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        within_lo: f64,
        #[arg(long)]
        within_hi: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Planar blocks whose within distances are below all cross distances.
    NiceBlocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        gap: f64,
    },
    /// Unstructured random data.
    GenericRandom {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "distance")]
        kind: String,
    },
    /// Points on a line.
    Line {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        positions: Vec<f64>,
    },
}

impl Generator {
    fn spec(self) -> Result<GeneratorSpec> {
        Ok(match self {
            Generator::PerfectUniform { n, k, within_lo, within_hi, lambda } => {
                GeneratorSpec::PerfectUniform { n, k, within_lo, within_hi, lambda }
            }
            Generator::NiceBlocks { n, k, gap } => GeneratorSpec::NiceBlocks { n, k, gap },
            Generator::GenericRandom { n, kind } => {
                let kind = match kind.as_str() {
                    "distance" => TableKind::Distance,
                    "similarity" => TableKind::Similarity,
                    other => return Err(CliError::Usage(format!("unknown table kind `{other}`"))),
                };
                GeneratorSpec::GenericRandom { n, kind }
            }
            Generator::Line { positions } => GeneratorSpec::Line { positions },
        })
    }
}

fn execute(cli: Cli) -> Result<()> {
    let max_n = cli.max_n.unwrap_or(DEFAULT_MAX_N);
    match cli.command {
        Command::Generate { generator, seed, out } => {
            let loaded = commands::generate(&generator.spec()?, seed)?;
            emit(out.as_deref(), &to_json(&loaded.dataset, loaded.planted.as_ref()))
        }
        Command::Run { dataset, algorithm, k, output } => {
            let loaded = read_dataset(&dataset)?;
            let a = AlgorithmHandle::parse(&algorithm, k)?;
            let report = commands::run(&loaded, &a, max_n)?;
            emit(output.out.as_deref(), &report.render(output.format))
        }
        Command::Probe { dataset, algorithm, labels, seed, budget, output } => {
            let loaded = read_dataset(&dataset)?;
            let c = match labels {
                Some(labels) => Clustering::from_labels(&labels)?,
                None => loaded
                    .planted
                    .clone()
                    .ok_or_else(|| CliError::Usage("no --labels given and the dataset has no planted clustering".into()))?,
            };
            let a = AlgorithmHandle::parse(&algorithm, Some(c.k()))?;
            let mut config = ProbeConfig { seed, max_n, ..ProbeConfig::default() };
            if let Some(b) = budget {
                config.budget = b;
            }
            let report = commands::probe(&loaded.dataset, &a, &c, config)?;
            emit(output.out.as_deref(), &report.render(output.format))
        }
        Command::Classify { config, seed, budget, output } => {
            let (mut cfg, base) = match &config {
                Some(path) => (ExperimentConfig::load(path)?, path.parent().unwrap_or(Path::new(".")).to_path_buf()),
                None => (ExperimentConfig::default(), PathBuf::from(".")),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(b) = budget {
                cfg.budget = b;
            }
            if cli.max_n.is_some() {
                cfg.max_n = cli.max_n;
            }
            let report = commands::classify(&cfg, &base)?;
            emit(output.out.as_deref(), &report.render(output.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
