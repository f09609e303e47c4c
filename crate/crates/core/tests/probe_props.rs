mod common;

use clusterlab_core::generate::{lab_rng, GeneratorSpec};
use clusterlab_core::structure::{is_nice, is_perfect, is_separation_uniform};
use clusterlab_core::{AlgorithmHandle, Clustering, Prober, TableKind, VerdictStatus, WeightedDataset};
use common::*;
use proptest::prelude::*;

fn handle(name: &str, k: usize) -> AlgorithmHandle {
    AlgorithmHandle::parse(name, Some(k)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn evidence_is_sound_and_consistent(ds in coords_dataset(4..=6), k in 2usize..4) {
        let prober = Prober::default();
        for name in ["kmeans", "kcenter", "average", "ward", "complete"] {
            let a = handle(name, k);
            let evidence = prober.probe_dataset(&a, &ds, 0).unwrap();
            for v in &evidence.verdicts {
                if v.status == VerdictStatus::Responsive {
                    prop_assert!(v.witness_produce.is_some() && v.witness_remove.is_some());
                    prop_assert!(v.replay(&a, &ds, prober.solver()).unwrap());
                    prop_assert!(!prober.certificate(&a, &ds, &v.clustering).unwrap());
                }
            }
        }
    }

    #[test]
    fn ratiocut_evidence_is_consistent(ds in similarity_dataset(4..=6)) {
        let evidence = Prober::default().probe_dataset(&handle("ratiocut", 2), &ds, 0).unwrap();
        prop_assert_eq!(evidence.counts.inconclusive, 0);
    }
}

fn responsive(prober: &Prober, a: &AlgorithmHandle, ds: &WeightedDataset, c: &Clustering) -> bool {
    prober.responsiveness(a, ds, c, None).unwrap().status == VerdictStatus::Responsive
}

#[test]
fn average_linkage_responds_exactly_off_nice_clusterings() {
    let mut rng = lab_rng(21);
    let prober = Prober::default();
    let a = handle("average", 2);
    let specs = [
        GeneratorSpec::NiceBlocks { n: 7, k: 2, gap: 1.0 },
        GeneratorSpec::NiceBlocks { n: 8, k: 3, gap: 0.5 },
        GeneratorSpec::GenericRandom { n: 6, kind: TableKind::Distance },
        GeneratorSpec::GenericRandom { n: 7, kind: TableKind::Distance },
    ];
    let mut probed = 0;
    for _ in 0..3 {
        for spec in &specs {
            let ds = spec.generate(&mut rng).unwrap().dataset;
            for c in prober.range_estimate(&a, &ds).unwrap().into_keys().filter(|c| !c.has_singleton()) {
                let nice = is_nice(&c, &ds, 0.0).unwrap().holds;
                assert_eq!(responsive(&prober, &a, &ds, &c), !nice, "{c} on {}", spec.name());
                probed += 1;
            }
        }
    }
    assert!(probed > 20);
}

#[test]
fn ratiocut_responds_exactly_off_perfect_uniform_clusterings() {
    let mut rng = lab_rng(22);
    let prober = Prober::default();
    for i in 0..12 {
        let (ds, k) = if i % 2 == 0 {
            let k = 2 + i % 4 / 2;
            let g = GeneratorSpec::PerfectUniform { n: 6 + i % 3, k, within_lo: 2.0, within_hi: 4.0, lambda: 1.0 }
                .generate(&mut rng)
                .unwrap();
            (g.dataset, k)
        } else {
            (GeneratorSpec::GenericRandom { n: 6, kind: TableKind::Similarity }.generate(&mut rng).unwrap().dataset, 2)
        };
        let a = handle("ratiocut", k);
        for c in prober.range_estimate(&a, &ds).unwrap().into_keys().filter(|c| !c.has_singleton()) {
            let certified = is_perfect(&c, &ds, 0.0).unwrap().holds
                && is_separation_uniform(&c, &ds, 0.0).unwrap().detection.holds;
            assert_eq!(responsive(&prober, &a, &ds, &c), !certified, "{c}");
        }
    }
}

#[test]
fn separability_implies_responsiveness() {
    let mut rng = lab_rng(23);
    let prober = Prober::default();
    for _ in 0..6 {
        let ds = GeneratorSpec::GenericRandom { n: 6, kind: TableKind::Distance }.generate(&mut rng).unwrap().dataset;
        for name in ["kmeans", "minsum", "kmedian", "kmedoids"] {
            let a = handle(name, 2);
            let clusterlab_core::AlgorithmOutput::Flat(unit) = prober.run(&a, &ds).unwrap() else { unreachable!() };
            for block in unit.blocks().into_iter().filter(|b| b.len() >= 2) {
                let s = [block[0], block[1]];
                if prober.separability(&a, &ds, &s, 2).unwrap().separated {
                    assert!(responsive(&prober, &a, &ds, &unit), "{name} on {unit}");
                }
            }
        }
    }
}

#[test]
fn robust_algorithms_have_single_outputs_over_the_range() {
    let mut rng = lab_rng(24);
    let prober = Prober::default();
    let ds = GeneratorSpec::GenericRandom { n: 7, kind: TableKind::Distance }.generate(&mut rng).unwrap().dataset;
    for name in ["mindiameter", "kcenter"] {
        assert_eq!(prober.range_estimate(&handle(name, 3), &ds).unwrap().len(), 1, "{name}");
    }
}
