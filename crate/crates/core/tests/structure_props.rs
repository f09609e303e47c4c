mod common;

use clusterlab_core::generate::{lab_rng, GeneratorSpec};
use clusterlab_core::structure::{enumerate_nice_clusterings, is_nice, is_perfect, is_separation_uniform, report};
use clusterlab_core::{agglomerate, enumerate_partitions, Clustering, Linkage, PairTable, TableKind, WeightedDataset};
use clusterlab_core::probe::log_uniform;
use common::*;
use proptest::prelude::*;

/// Similarity table of value `hi` inside the blocks of `labels` and `lo` across them.
fn two_level(labels: &[usize], hi: f64, lo: f64) -> WeightedDataset {
    let n = labels.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { hi + 1.0 } else if labels[i] == labels[j] { hi } else { lo }).collect())
        .collect();
    WeightedDataset::unweighted(PairTable::from_rows(TableKind::Similarity, &rows).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_detectors_ignore_weights((ds, c) in dataset_and_clustering(coords_dataset(3..=8)), seed in any::<u64>()) {
        let w = log_uniform(ds.n(), 1e-3, 1e3, &mut lab_rng(seed));
        prop_assert_eq!(report(&c, &ds).unwrap(), report(&c, &ds.reweighted(w).unwrap()).unwrap());
    }

    #[test]
    fn similarity_detectors_ignore_weights((ds, c) in dataset_and_clustering(similarity_dataset(3..=8)), seed in any::<u64>()) {
        let w = log_uniform(ds.n(), 1e-3, 1e3, &mut lab_rng(seed));
        prop_assert_eq!(report(&c, &ds).unwrap(), report(&c, &ds.reweighted(w).unwrap()).unwrap());
    }

    #[test]
    fn perfect_uniform_clustering_is_unique(labels in prop::collection::vec(0usize..3, 4..=8), hi in 2.0f64..5.0, lo in 0.0f64..1.9) {
        let Ok(planted) = Clustering::from_labels(&labels) else { return Ok(()) };
        let ds = two_level(planted.labels(), hi, lo);
        let n = ds.n();
        for k in 2..n {
            let mut found = Vec::new();
            for c in enumerate_partitions(n, k, 12).unwrap() {
                if is_perfect(&c, &ds, 0.0).unwrap().holds && is_separation_uniform(&c, &ds, 0.0).unwrap().detection.holds {
                    found.push(c);
                }
            }
            prop_assert!(found.len() <= 1);
            if k == planted.k() {
                prop_assert_eq!(found, vec![planted.clone()]);
            }
        }
    }

    #[test]
    fn global_gap_implies_nice((p, labels) in points(4..=8).prop_flat_map(|p| { let n = p.len(); (Just(p), prop::collection::vec(0usize..3, n)) })) {
        let Ok(c) = Clustering::from_labels(&labels) else { return Ok(()) };
        // Spread blocks far apart so every within distance is below every cross distance.
        let moved: Vec<Vec<f64>> = p.iter().zip(c.labels()).map(|(q, &l)| vec![q[0] + 100.0 * l as f64, q[1]]).collect();
        let ds = WeightedDataset::from_coords(moved, vec![1.0; labels.len()]).unwrap();
        prop_assert!(is_nice(&c, &ds, 0.0).unwrap().holds);
    }
}

#[test]
fn nice_clusterings_survive_random_weightings_in_average_linkage() {
    let mut rng = lab_rng(31);
    for i in 0..6 {
        let spec = if i % 2 == 0 {
            GeneratorSpec::NiceBlocks { n: 7, k: 2 + i % 3, gap: 0.5 }
        } else {
            GeneratorSpec::GenericRandom { n: 7, kind: TableKind::Distance }
        };
        let ds = spec.generate(&mut rng).unwrap().dataset;
        let nice = enumerate_nice_clusterings(&ds, 12).unwrap();
        for _ in 0..100 {
            let w = log_uniform(ds.n(), 1e-2, 1e2, &mut rng);
            let d = agglomerate(&ds.reweighted(w).unwrap(), Linkage::Average).unwrap();
            for c in &nice {
                assert!(d.outputs(c), "{c} missing from {d}");
            }
        }
    }
}
