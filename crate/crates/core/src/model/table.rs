use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Whether a [`PairTable`] holds dissimilarities or similarities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    Distance,
    Similarity,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Distance => "distance",
            TableKind::Similarity => "similarity",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A dense symmetric `n x n` table of non-negative reals, stored row-major.
///
/// Construction only checks shape and finiteness; the metric conditions are
/// enforced by [`crate::validate_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    n: usize,
    kind: TableKind,
    values: Vec<f64>,
}

impl PairTable {
    pub fn from_rows(kind: TableKind, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            values.extend_from_slice(r);
        }
        Self::from_flat(kind, n, values)
    }

    pub fn from_flat(kind: TableKind, n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "table values",
                got: values.len(),
                expected: n * n,
            });
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { i: idx / n.max(1), j: idx % n.max(1) });
            }
        }
        Ok(Self { n, kind, values })
    }

    /// Euclidean distances between the given points.
    pub fn euclidean(points: &[Vec<f64>]) -> Result<Self> {
        let n = points.len();
        let dim = points.first().map_or(0, Vec::len);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { what: "coordinate vector", got: p.len(), expected: dim });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteEntry { i: 0, j: 0 });
            }
        }
        let mut values = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = libm::sqrt(squared_euclidean(&points[i], &points[j]));
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(Self { n, kind: TableKind::Distance, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Sub-table on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut values = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                values.push(self.get(i, j));
            }
        }
        Self { n: m, kind: self.kind, values }
    }

    /// Whether `x` and `y` are duplicates up to `tol`.
    ///
    /// For distances this is `d(x,y) = 0` and `d(x,z) = d(y,z)` for every `z`.
    /// Similarities use the same row condition, with the mutual similarity
    /// equal to both self-similarities on the diagonal.
    pub fn are_duplicates(&self, x: usize, y: usize, tol: f64) -> bool {
        if x == y {
            return true;
        }
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        let mutual_ok = match self.kind {
            TableKind::Distance => self.get(x, y) <= tol,
            TableKind::Similarity => {
                close(self.get(x, y), self.get(x, x)) && close(self.get(x, y), self.get(y, y))
            }
        };
        mutual_ok
            && (0..self.n)
                .filter(|&z| z != x && z != y)
                .all(|z| close(self.get(x, z), self.get(y, z)))
    }
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
