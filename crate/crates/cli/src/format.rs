//! The dataset file: one JSON document
//! `{kind, n, weights, matrix | coords, planted?}`.
//!
//! Numbers are written in shortest round-trip form, so a dataset survives a
//! write and read bit for bit.

use std::path::Path;

use clusterlab_core::{Clustering, PairTable, TableKind, WeightedDataset};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{read_to_string, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDto {
    Distance,
    Similarity,
}

impl From<TableKind> for KindDto {
    fn from(kind: TableKind) -> Self {
        match kind {
            TableKind::Distance => KindDto::Distance,
            TableKind::Similarity => KindDto::Similarity,
        }
    }
}

impl From<KindDto> for TableKind {
    fn from(kind: KindDto) -> Self {
        match kind {
            KindDto::Distance => TableKind::Distance,
            KindDto::Similarity => TableKind::Similarity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub kind: KindDto,
    pub n: usize,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    /// Labels of the clustering the generator planted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<Vec<usize>>,
}

/// A dataset together with its planted clustering, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub dataset: WeightedDataset,
    pub planted: Option<Clustering>,
}

impl DatasetFile {
    /// Distance datasets with coordinates are stored by their coordinates.
    pub fn from_dataset(ds: &WeightedDataset, planted: Option<&Clustering>) -> Self {
        let (matrix, coords) = match (ds.kind(), ds.coords()) {
            (TableKind::Distance, Some(c)) => (None, Some(c.to_vec())),
            _ => (Some(ds.table().rows()), None),
        };
        Self {
            kind: ds.kind().into(),
            n: ds.n(),
            weights: ds.weights().to_vec(),
            matrix,
            coords,
            planted: planted.map(|c| c.labels().to_vec()),
        }
    }

    pub fn into_dataset(self) -> Result<LoadedDataset> {
        if self.weights.len() != self.n {
            return Err(CliError::Usage(format!("expected {} weights, found {}", self.n, self.weights.len())));
        }
        let dataset = match (self.matrix, self.coords) {
            (Some(rows), None) => {
                if rows.len() != self.n {
                    return Err(CliError::Usage(format!("expected {} matrix rows, found {}", self.n, rows.len())));
                }
                let table = PairTable::from_rows(self.kind.into(), &rows)?;
                clusterlab_core::validate_dataset(table, self.weights)?
            }
            (None, Some(coords)) => {
                if self.kind != KindDto::Distance {
                    return Err(CliError::Usage("coords describe a distance dataset".into()));
                }
                if coords.len() != self.n {
                    return Err(CliError::Usage(format!("expected {} points, found {}", self.n, coords.len())));
                }
                WeightedDataset::from_coords(coords, self.weights)?
            }
            _ => return Err(CliError::Usage("a dataset needs exactly one of `matrix` and `coords`".into())),
        };
        let planted = match self.planted {
            Some(labels) if labels.len() != dataset.n() => {
                return Err(CliError::Usage(format!("planted clustering has {} labels for {} elements", labels.len(), dataset.n())))
            }
            Some(labels) => Some(Clustering::from_labels(&labels)?),
            None => None,
        };
        Ok(LoadedDataset { dataset, planted })
    }
}

/// Pretty-printed with one matrix row or point per line.
pub fn to_json(ds: &WeightedDataset, planted: Option<&Clustering>) -> String {
    let file = DatasetFile::from_dataset(ds, planted);
    let json = |v: &dyn erased::Json| v.json();
    let mut fields = vec![
        format!("  \"kind\": {}", json(&file.kind)),
        format!("  \"n\": {}", file.n),
        format!("  \"weights\": {}", json(&file.weights)),
    ];
    for (name, rows) in [("matrix", &file.matrix), ("coords", &file.coords)] {
        if let Some(rows) = rows {
            let body: Vec<String> = rows.iter().map(|r| format!("    {}", json(r))).collect();
            fields.push(format!("  \"{name}\": [\n{}\n  ]", body.join(",\n")));
        }
    }
    if let Some(p) = &file.planted {
        fields.push(format!("  \"planted\": {}", json(p)));
    }
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}

mod erased {
    pub trait Json {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Json for T {
        fn json(&self) -> String {
            serde_json::to_string(self).expect("datasets serialize")
        }
    }
}

pub fn from_json(text: &str) -> std::result::Result<Result<LoadedDataset>, serde_json::Error> {
    serde_json::from_str::<DatasetFile>(text).map(DatasetFile::into_dataset)
}

pub fn read_dataset(path: &Path) -> Result<LoadedDataset> {
    let text = read_to_string(path)?;
    from_json(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })?
}

pub fn write_dataset(path: &Path, ds: &WeightedDataset, planted: Option<&Clustering>) -> Result<()> {
    write_atomic(path, &to_json(ds, planted))
}
