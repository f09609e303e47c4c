use alloc::vec::Vec;

use super::table::{squared_euclidean, PairTable, TableKind};
use crate::error::{Error, Result};

/// Coordinates must reproduce the table's distances to this absolute tolerance.
const COORD_TOLERANCE: f64 = 1e-9;

/// A pair table with strictly positive per-element weights and, optionally,
/// the coordinates the distances were computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDataset {
    table: PairTable,
    weights: Vec<f64>,
    coords: Option<Vec<Vec<f64>>>,
}

/// Checks a raw table and weight vector and bundles them into a dataset.
///
/// Distance tables must have a zero diagonal; an off-diagonal zero is accepted
/// only between duplicates (identical rows). Similarity diagonals are not
/// inspected beyond non-negativity.
pub fn validate_dataset(table: PairTable, weights: Vec<f64>) -> Result<WeightedDataset> {
    let n = table.n();
    if n == 0 {
        return Err(Error::DimensionMismatch { what: "element count", got: 0, expected: 1 });
    }
    if weights.len() != n {
        return Err(Error::DimensionMismatch { what: "weights", got: weights.len(), expected: n });
    }
    check_weights(&weights)?;
    for i in 0..n {
        for j in 0..n {
            let v = table.get(i, j);
            if v < 0.0 {
                return Err(Error::NegativeEntry { i, j, value: v });
            }
            if j > i && v != table.get(j, i) {
                return Err(Error::Asymmetric { i, j, a: v, b: table.get(j, i) });
            }
        }
    }
    if table.kind() == TableKind::Distance {
        for i in 0..n {
            if table.get(i, i) != 0.0 {
                return Err(Error::NonZeroDiagonal { index: i });
            }
            for j in (i + 1)..n {
                if table.get(i, j) == 0.0 {
                    if let Some(z) = (0..n).find(|&z| table.get(i, z) != table.get(j, z)) {
                        return Err(Error::ZeroDistanceNonDuplicate { x: i, y: j, z });
                    }
                }
            }
        }
    }
    Ok(WeightedDataset { table, weights, coords: None })
}

fn check_weights(weights: &[f64]) -> Result<()> {
    match weights.iter().position(|&w| !w.is_finite() || w <= 0.0) {
        Some(index) => Err(Error::NonPositiveWeight { index, value: weights[index] }),
        None => Ok(()),
    }
}

impl WeightedDataset {
    /// Euclidean distance dataset over explicit points.
    pub fn from_coords(coords: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let table = PairTable::euclidean(&coords)?;
        let mut ds = validate_dataset(table, weights)?;
        ds.coords = Some(coords);
        Ok(ds)
    }

    /// Attaches coordinates to an existing distance dataset, checking that they
    /// reproduce the table.
    pub fn with_coords(mut self, coords: Vec<Vec<f64>>) -> Result<Self> {
        if self.table.kind() != TableKind::Distance {
            return Err(Error::KindMismatch { expected: "distance" });
        }
        if coords.len() != self.n() {
            return Err(Error::DimensionMismatch { what: "coords", got: coords.len(), expected: self.n() });
        }
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let d = libm::sqrt(squared_euclidean(&coords[i], &coords[j]));
                if (d - self.table.get(i, j)).abs() > COORD_TOLERANCE {
                    return Err(Error::CoordsMismatch { i, j });
                }
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Unit-weight dataset.
    pub fn unweighted(table: PairTable) -> Result<Self> {
        let n = table.n();
        validate_dataset(table, alloc::vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn kind(&self) -> TableKind {
        self.table.kind()
    }

    pub fn table(&self) -> &PairTable {
        &self.table
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.table.get(i, j)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Same table and coordinates, new weights.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::DimensionMismatch { what: "weights", got: weights.len(), expected: self.n() });
        }
        check_weights(&weights)?;
        Ok(Self { table: self.table.clone(), weights, coords: self.coords.clone() })
    }

    /// Weights divided by their maximum, so the largest is exactly 1.
    pub(crate) fn normalized(&self) -> Self {
        let max = self.weights.iter().copied().fold(0.0, f64::max);
        if max == 1.0 {
            return self.clone();
        }
        Self {
            table: self.table.clone(),
            weights: self.weights.iter().map(|w| w / max).collect(),
            coords: self.coords.clone(),
        }
    }

    /// The sub-dataset on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        Self {
            table: self.table.restrict(indices),
            weights: indices.iter().map(|&i| self.weights[i]).collect(),
            coords: self.coords.as_ref().map(|c| indices.iter().map(|&i| c[i].clone()).collect()),
        }
    }

    /// Duplicate classes as a label per element (labels in order of first
    /// appearance). `None` when the dataset has no duplicates.
    pub(crate) fn duplicate_labels(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut labels = alloc::vec![usize::MAX; n];
        let mut next = 0;
        let mut any = false;
        for i in 0..n {
            if labels[i] != usize::MAX {
                continue;
            }
            labels[i] = next;
            for j in (i + 1)..n {
                if labels[j] == usize::MAX && self.table.are_duplicates(i, j, 0.0) {
                    labels[j] = next;
                    any = true;
                }
            }
            next += 1;
        }
        any.then_some(labels)
    }
}

/// Result of collapsing duplicates into weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Deduped {
    pub dataset: WeightedDataset,
    /// Index of the representative (in `dataset`) for every input element.
    pub class_of: Vec<usize>,
    /// Input index of each representative; the first member of its class.
    pub representatives: Vec<usize>,
}

/// Collapses duplicate elements of a unit-weight distance table into single
/// elements whose weight is the size of their duplicate class.
///
/// `tol` is the absolute tolerance for "zero" and "equal" distances; pass 0
/// for exact comparison.
pub fn dedupe(table: &PairTable, tol: f64) -> Result<Deduped> {
    if table.kind() != TableKind::Distance {
        return Err(Error::KindMismatch { expected: "distance" });
    }
    let n = table.n();
    let mut class_of = alloc::vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut sizes: Vec<f64> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = representatives.len();
        class_of[x] = id;
        representatives.push(x);
        sizes.push(1.0);
        for y in (x + 1)..n {
            if class_of[y] != usize::MAX || table.get(x, y) > tol {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| (table.get(x, z) - table.get(y, z)).abs() > tol) {
                return Err(Error::ZeroDistanceNonDuplicate { x, y, z });
            }
            class_of[y] = id;
            sizes[id] += 1.0;
        }
    }
    let reduced = table.restrict(&representatives);
    let dataset = validate_dataset(reduced, sizes)?;
    Ok(Deduped { dataset, class_of, representatives })
}

/// Result of replacing every integer-weight element by that many unit-weight copies.
#[derive(Debug, Clone, PartialEq)]
pub struct Expanded {
    pub dataset: WeightedDataset,
    /// Source element of every copy. Copies of one element are contiguous.
    pub origin: Vec<usize>,
}

/// Replaces each element of weight `m` by `m` unit-weight duplicates.
///
/// Copies of a similarity element are given the element's diagonal entry as
/// their mutual similarity.
pub fn expand(ds: &WeightedDataset) -> Result<Expanded> {
    let mut origin = Vec::new();
    for (index, &w) in ds.weights().iter().enumerate() {
        if w != libm::round(w) || w < 1.0 {
            return Err(Error::NonIntegerWeight { index, value: w });
        }
        origin.extend(core::iter::repeat_n(index, w as usize));
    }
    let m = origin.len();
    let mut values = Vec::with_capacity(m * m);
    for &a in &origin {
        for &b in &origin {
            values.push(ds.d(a, b));
        }
    }
    let table = PairTable::from_flat(ds.kind(), m, values)?;
    let mut dataset = validate_dataset(table, alloc::vec![1.0; m])?;
    dataset.coords = ds.coords().map(|c| origin.iter().map(|&o| c[o].clone()).collect());
    Ok(Expanded { dataset, origin })
}
