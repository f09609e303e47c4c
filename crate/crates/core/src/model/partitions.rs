use alloc::vec::Vec;

use super::clustering::Clustering;
use crate::error::{Error, Result};

/// Largest element count the exact solvers will enumerate by default.
pub const DEFAULT_MAX_N: usize = 12;

/// Stirling number of the second kind, `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = alloc::vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Every partition of `0..n` into exactly `k` non-empty blocks, as
/// restricted-growth strings in lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    labels: Vec<usize>,
    k: usize,
    started: bool,
    done: bool,
}

/// Enumerates all `k`-clusterings of `n` elements, refusing `n > cap`.
pub fn enumerate_partitions(n: usize, k: usize, cap: usize) -> Result<Partitions> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    if k < 2 || k >= n {
        return Err(Error::InvalidClustering(alloc::format!(
            "cannot enumerate {k}-clusterings of {n} elements; need 1 < k < n"
        )));
    }
    Ok(Partitions::new(n, k))
}

impl Partitions {
    /// Unchecked constructor; accepts any `1 <= k <= n`.
    pub(crate) fn new(n: usize, k: usize) -> Self {
        debug_assert!(k >= 1 && k <= n);
        let mut labels = alloc::vec![0; n];
        fill_tail(&mut labels, 0, 0, k);
        Self { labels, k, started: false, done: n == 0 }
    }

    /// Steps to the next partition and borrows it. Avoids allocating a
    /// [`Clustering`] per step.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.labels);
        }
        if self.step() {
            Some(&self.labels)
        } else {
            self.done = true;
            None
        }
    }

    fn step(&mut self) -> bool {
        let n = self.labels.len();
        let k = self.k;
        // prefix_max[i] = max(labels[..i]), with labels[0] == 0.
        let mut prefix_max = alloc::vec![0usize; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        for i in (1..n).rev() {
            let next = self.labels[i] + 1;
            if next > prefix_max[i] + 1 || next > k - 1 {
                continue;
            }
            let max_after = prefix_max[i].max(next);
            // Remaining slots must still be able to introduce the missing labels.
            if n - i - 1 < k - 1 - max_after {
                continue;
            }
            self.labels[i] = next;
            fill_tail(&mut self.labels, i + 1, max_after, k);
            return true;
        }
        false
    }
}

/// Smallest completion of `labels[from..]` given the prefix maximum, reaching
/// exactly `k` labels: zeros, then the missing labels in order at the end.
fn fill_tail(labels: &mut [usize], from: usize, prefix_max: usize, k: usize) {
    let n = labels.len();
    let missing = k - 1 - prefix_max;
    for (offset, slot) in labels[from..].iter_mut().enumerate() {
        let pos = from + offset;
        *slot = if pos + missing >= n { prefix_max + 1 + (pos + missing - n) } else { 0 };
    }
}

impl Iterator for Partitions {
    type Item = Clustering;

    fn next(&mut self) -> Option<Clustering> {
        let k = self.k;
        self.advance().map(|l| Clustering::from_rgs(l.to_vec(), k))
    }
}
