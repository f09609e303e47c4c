#![allow(dead_code)]

use clusterlab_core::{Clustering, PairTable, TableKind, WeightedDataset};
use proptest::prelude::*;

pub fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    n.prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0.0f64..10.0, 2), n))
}

pub fn log_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n).prop_map(|e| e.into_iter().map(|x| 10f64.powf(x)).collect())
}

pub fn int_weights(n: usize, max: u32) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1..=max, n).prop_map(|w| w.into_iter().map(f64::from).collect())
}

/// Coordinate dataset with log-uniform weights.
pub fn coords_dataset(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WeightedDataset> {
    points(n).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), log_weights(n)).prop_map(|(p, w)| WeightedDataset::from_coords(p, w).unwrap())
    })
}

/// Symmetric similarity table with a diagonal of 2 and off-diagonal values in `(0, 1]`.
pub fn similarity_dataset(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WeightedDataset> {
    n.prop_flat_map(|n| (prop::collection::vec(0.001f64..1.0, n * (n - 1) / 2), log_weights(n)))
        .prop_map(|(upper, w)| {
            let n = w.len();
            let mut rows = vec![vec![2.0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let table = PairTable::from_rows(TableKind::Similarity, &rows).unwrap();
            WeightedDataset::unweighted(table).unwrap().reweighted(w).unwrap()
        })
}

/// A clustering of `n` elements with `1 < k < n`.
pub fn clustering(n: usize) -> impl Strategy<Value = Clustering> {
    (2..n).prop_flat_map(move |k| {
        prop::collection::vec(0..k, n).prop_filter_map("need k blocks", move |labels| {
            let c = Clustering::from_labels(&labels).ok()?;
            (c.k() == k).then_some(c)
        })
    })
}

pub fn dataset_and_clustering(
    ds: impl Strategy<Value = WeightedDataset>,
) -> impl Strategy<Value = (WeightedDataset, Clustering)> {
    ds.prop_flat_map(|ds| {
        let n = ds.n();
        (Just(ds), clustering(n))
    })
}
