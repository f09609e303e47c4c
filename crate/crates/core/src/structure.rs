//! Clusterability detectors: perfect, separation-uniform and nice clusterings.
//!
//! None of these read the weights. Comparisons are exact by default; a
//! positive `tol` demands that strict inequalities hold with that margin and
//! lets equalities hold within it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{enumerate_partitions, Clustering, TableKind, WeightedDataset};
use crate::numeric::CompensatedSum;

/// The lexicographically smallest tuple that violates a property.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// A within-cluster pair whose similarity does not exceed that of a cross pair.
    Perfect { within: (usize, usize), cross: (usize, usize) },
    /// The first cross pairs attaining the smallest and the largest cross similarity.
    Uniform { low: (usize, usize), high: (usize, usize) },
    /// `x1 ~ x2`, `x1 !~ x3` with `d(x1, x2) >= d(x1, x3)`.
    Nice { x1: usize, x2: usize, x3: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Detection {
    fn from_witness(witness: Option<Witness>) -> Self {
        Self { holds: witness.is_none(), witness }
    }
}

/// Outcome of [`is_separation_uniform`]; `lambda` is set when it holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniformity {
    pub detection: Detection,
    pub lambda: Option<f64>,
}

/// Every detector applicable to a clustering's table kind. Similarity tables
/// get `perfect` and `separation_uniform`; distance tables get `nice`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    pub perfect: Option<Detection>,
    pub separation_uniform: Option<Detection>,
    pub lambda: Option<f64>,
    pub nice: Option<Detection>,
}

fn require(ds: &WeightedDataset, c: &Clustering, kind: TableKind) -> Result<()> {
    if ds.kind() != kind {
        return Err(Error::KindMismatch { expected: kind.as_str() });
    }
    if c.n() != ds.n() {
        return Err(Error::DimensionMismatch { what: "clustering", got: c.n(), expected: ds.n() });
    }
    Ok(())
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// Every within-cluster similarity strictly exceeds every cross-cluster one.
pub fn is_perfect(c: &Clustering, ds: &WeightedDataset, tol: f64) -> Result<Detection> {
    require(ds, c, TableKind::Similarity)?;
    let n = ds.n();
    let max_cross = pairs(n)
        .filter(|&(i, j)| !c.same_cluster(i, j))
        .map(|(i, j)| ds.d(i, j))
        .fold(f64::NEG_INFINITY, f64::max);
    let witness = pairs(n)
        .filter(|&(i, j)| c.same_cluster(i, j) && ds.d(i, j) <= max_cross + tol)
        .find_map(|(a, b)| {
            let within = ds.d(a, b);
            pairs(n)
                .find(|&(i, j)| !c.same_cluster(i, j) && within <= ds.d(i, j) + tol)
                .map(|cross| Witness::Perfect { within: (a, b), cross })
        });
    Ok(Detection::from_witness(witness))
}

/// All cross-cluster similarities equal a common `lambda`, up to `tol`
/// (absolute) from it. Reports `lambda` as their mean.
pub fn is_separation_uniform(c: &Clustering, ds: &WeightedDataset, tol: f64) -> Result<Uniformity> {
    require(ds, c, TableKind::Similarity)?;
    let cross: Vec<(usize, usize)> = pairs(ds.n()).filter(|&(i, j)| !c.same_cluster(i, j)).collect();
    let value = |&(i, j): &(usize, usize)| ds.d(i, j);
    let mut low = cross[0];
    let mut high = cross[0];
    for p in &cross {
        if value(p) < value(&low) {
            low = *p;
        }
        if value(p) > value(&high) {
            high = *p;
        }
    }
    let (lo, hi) = (value(&low), value(&high));
    if hi - lo > 2.0 * tol {
        return Ok(Uniformity {
            detection: Detection::from_witness(Some(Witness::Uniform { low, high })),
            lambda: None,
        });
    }
    let lambda = if lo == hi {
        lo
    } else {
        cross.iter().map(value).collect::<CompensatedSum>().value() / cross.len() as f64
    };
    Ok(Uniformity { detection: Detection::from_witness(None), lambda: Some(lambda) })
}

/// Every element is strictly closer to all members of its own cluster than
/// to any element outside it.
pub fn is_nice(c: &Clustering, ds: &WeightedDataset, tol: f64) -> Result<Detection> {
    require(ds, c, TableKind::Distance)?;
    Ok(Detection::from_witness(nice_witness(c.labels(), ds, tol)))
}

fn nice_witness(labels: &[usize], ds: &WeightedDataset, tol: f64) -> Option<Witness> {
    let n = labels.len();
    for x1 in 0..n {
        // Only the farthest same-cluster point and nearest other point matter
        // for existence; the scan below recovers the smallest tuple.
        let mut far = f64::NEG_INFINITY;
        let mut near = f64::INFINITY;
        for y in 0..n {
            if y == x1 {
                continue;
            }
            if labels[y] == labels[x1] {
                far = far.max(ds.d(x1, y));
            } else {
                near = near.min(ds.d(x1, y));
            }
        }
        if far + tol < near {
            continue;
        }
        for x2 in (0..n).filter(|&y| y != x1 && labels[y] == labels[x1]) {
            let d12 = ds.d(x1, x2);
            if let Some(x3) = (0..n).find(|&y| labels[y] != labels[x1] && d12 + tol >= ds.d(x1, y)) {
                return Some(Witness::Nice { x1, x2, x3 });
            }
        }
    }
    None
}

/// The smallest `(x1, x2, x3)` with `x1 ~ x2`, `x1 !~ x3` and
/// `d(x1, x2) > d(x1, x3)` strictly; the configuration a pair spike on
/// `x1, x2` exploits against average linkage.
pub fn strict_non_nice_witness(c: &Clustering, ds: &WeightedDataset) -> Option<(usize, usize, usize)> {
    let n = c.n();
    for x1 in 0..n {
        for x2 in (0..n).filter(|&y| y != x1 && c.same_cluster(x1, y)) {
            if let Some(x3) = (0..n).find(|&y| !c.same_cluster(x1, y) && ds.d(x1, x2) > ds.d(x1, y)) {
                return Some((x1, x2, x3));
            }
        }
    }
    None
}

/// Every nice clustering of `ds` (all `1 < k < n`), in canonical order.
pub fn enumerate_nice_clusterings(ds: &WeightedDataset, cap: usize) -> Result<Vec<Clustering>> {
    if ds.kind() != TableKind::Distance {
        return Err(Error::KindMismatch { expected: "distance" });
    }
    let n = ds.n();
    let mut out = Vec::new();
    for k in 2..n {
        let mut partitions = enumerate_partitions(n, k, cap)?;
        while let Some(labels) = partitions.advance() {
            if nice_witness(labels, ds, 0.0).is_none() {
                out.push(Clustering::from_labels(labels)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Runs every detector that applies to the dataset's table kind, exactly.
pub fn report(c: &Clustering, ds: &WeightedDataset) -> Result<StructureReport> {
    match ds.kind() {
        TableKind::Similarity => {
            let u = is_separation_uniform(c, ds, 0.0)?;
            Ok(StructureReport {
                perfect: Some(is_perfect(c, ds, 0.0)?),
                separation_uniform: Some(u.detection),
                lambda: u.lambda,
                nice: None,
            })
        }
        TableKind::Distance => Ok(StructureReport {
            perfect: None,
            separation_uniform: None,
            lambda: None,
            nice: Some(is_nice(c, ds, 0.0)?),
        }),
    }
}
