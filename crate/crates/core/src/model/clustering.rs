use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::dataset::WeightedDataset;
use crate::error::{Error, Result};

/// An unlabeled partition of `0..n` into `k` non-empty blocks with `1 < k < n`.
///
/// Stored as a restricted-growth string: element 0 has label 0 and every
/// element's label is at most one more than the largest label before it. Two
/// clusterings are equal exactly when they are the same set of blocks, and the
/// derived ordering is the lexicographic order of those strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clustering {
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    /// Builds a clustering from arbitrary cluster ids, relabelling them by first
    /// appearance.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let (labels, k) = canonicalize(labels);
        Self::checked(labels, k)
    }

    /// Builds a clustering of `0..n` from its blocks.
    pub fn from_blocks(blocks: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut labels = alloc::vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidClustering(format!("block {b} is empty")));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::InvalidClustering(format!("element {x} out of range 0..{n}")));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidClustering(format!("element {x} appears twice")));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidClustering(format!("element {x} is not covered")));
        }
        Self::from_labels(&labels)
    }

    fn checked(labels: Vec<usize>, k: usize) -> Result<Self> {
        let n = labels.len();
        if k < 2 || k >= n {
            return Err(Error::InvalidClustering(format!(
                "{k} clusters over {n} elements; need 1 < k < n"
            )));
        }
        Ok(Self { labels, k })
    }

    /// `labels` must already be a restricted-growth string with `k` blocks.
    pub(crate) fn from_rgs(labels: Vec<usize>, k: usize) -> Self {
        debug_assert_eq!(canonicalize(&labels), (labels.clone(), k));
        Self { labels, k }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, x: usize) -> usize {
        self.labels[x]
    }

    #[inline]
    pub fn same_cluster(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    /// Blocks in label order, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = alloc::vec![Vec::new(); self.k];
        for (x, &l) in self.labels.iter().enumerate() {
            blocks[l].push(x);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = alloc::vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn has_singleton(&self) -> bool {
        self.block_sizes().contains(&1)
    }

    /// `w(C_i)` for every cluster.
    pub fn cluster_weights(&self, ds: &WeightedDataset) -> Vec<f64> {
        let mut w = alloc::vec![0.0; self.k];
        for (x, &l) in self.labels.iter().enumerate() {
            w[l] += ds.weight(x);
        }
        w
    }

    /// The clustering induced on copies, where copy `c` descends from `origin[c]`.
    pub fn lift(&self, origin: &[usize]) -> Result<Self> {
        let labels: Vec<usize> = origin.iter().map(|&o| self.labels[o]).collect();
        Self::from_labels(&labels)
    }

    /// Inverse of [`Clustering::lift`]: `None` if some element's copies are split.
    pub fn project(&self, origin: &[usize], n: usize) -> Option<Result<Self>> {
        let mut labels = alloc::vec![usize::MAX; n];
        for (c, &o) in origin.iter().enumerate() {
            match labels[o] {
                usize::MAX => labels[o] = self.labels[c],
                l if l != self.labels[c] => return None,
                _ => {}
            }
        }
        Some(Self::from_labels(&labels))
    }
}

/// Relabels by first appearance; returns the string and its block count.
pub(crate) fn canonicalize(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map: Vec<(usize, usize)> = Vec::new();
    let out = labels
        .iter()
        .map(|&l| match map.iter().find(|(from, _)| *from == l) {
            Some(&(_, to)) => to,
            None => {
                let to = map.len();
                map.push((l, to));
                to
            }
        })
        .collect();
    (out, map.len())
}

impl fmt::Display for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn labels_are_canonicalized() {
        let a = Clustering::from_labels(&[7, 7, 3, 3]).unwrap();
        let b = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.labels(), &[0, 0, 1, 1]);
        assert_eq!(a.to_string(), "{{0,1},{2,3}}");
    }

    #[test]
    fn trivial_partitions_are_rejected() {
        assert!(Clustering::from_labels(&[0, 0, 0]).is_err());
        assert!(Clustering::from_labels(&[0, 1, 2]).is_err());
        assert!(Clustering::from_labels(&[0, 1]).is_err());
    }

    #[test]
    fn from_blocks_checks_cover() {
        assert!(Clustering::from_blocks(&[vec![0, 2], vec![1]], 3).is_ok());
        assert!(Clustering::from_blocks(&[vec![0], vec![1]], 3).is_err());
        assert!(Clustering::from_blocks(&[vec![0, 1], vec![1, 2]], 3).is_err());
    }

    #[test]
    fn lift_and_project() {
        let c = Clustering::from_labels(&[0, 1, 1]).unwrap();
        let origin = [0, 0, 1, 2, 2];
        let lifted = c.lift(&origin).unwrap();
        assert_eq!(lifted.labels(), &[0, 0, 1, 1, 1]);
        assert_eq!(lifted.project(&origin, 3).unwrap().unwrap(), c);
        let split = Clustering::from_labels(&[0, 1, 1, 1, 0]).unwrap();
        assert!(split.project(&origin, 3).is_none());
    }
}
