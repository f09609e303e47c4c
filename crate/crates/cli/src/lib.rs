//! File formats, reports and commands behind the `clusterlab` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod io;
pub mod report;

pub use config::{ExperimentConfig, GeneratorConfig, NamedDataset};
pub use error::{CliError, Result};
pub use format::{read_dataset, write_dataset, DatasetFile, LoadedDataset};
pub use report::{ClassifyReport, Format, ProbeReport, RunReport};
