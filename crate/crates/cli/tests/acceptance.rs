//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clusterlab::commands;
use clusterlab::config::ExperimentConfig;
use clusterlab_core::generate::{lab_rng, GeneratorSpec, LabRng};
use clusterlab_core::partitional::{kmeans_cost, ratiocut_cost};
use clusterlab_core::probe::log_uniform;
use clusterlab_core::structure::{is_nice, is_perfect, is_separation_uniform};
use clusterlab_core::{
    agglomerate, exact_minimize, expand, AlgorithmHandle, Category, Clustering, EvidenceCounts, Linkage,
    Objective, ObjectiveSpec, PairTable, Prober, TableKind, VerdictStatus, WeightedDataset,
};
use rand::seq::SliceRandom;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1  ratiocut closed form and planted minimizer", ratiocut_closed_form),
        ("2  ratiocut responds iff not perfect+uniform", ratiocut_characterization),
        ("3  weight separability", weight_separability),
        ("4a average linkage keeps nice clusterings", average_keeps_nice),
        ("4b pair spike removes non-nice average clusterings", average_pair_spike),
        ("5  weight robustness", weight_robustness),
        ("6  ward and divisive sensitivity", ward_and_divisive),
        ("7  duplicate equivalence", duplicate_equivalence),
        ("8  kmeans centroid cross-check", kmeans_centroid),
        ("9  default classify grid", default_grid),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {} [{secs:.1}s]", outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion line(s) failed");
        ExitCode::FAILURE
    }
}

fn generic(n: usize, kind: TableKind, rng: &mut LabRng) -> WeightedDataset {
    GeneratorSpec::GenericRandom { n, kind }.generate(rng).unwrap().dataset
}

fn reweight(ds: &WeightedDataset, rng: &mut LabRng) -> WeightedDataset {
    ds.reweighted(log_uniform(ds.n(), 1e-2, 1e2, rng)).unwrap()
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn ratiocut_closed_form() -> Outcome {
    let mut rng = lab_rng(101);
    let (mut runs, mut cost_misses, mut argmin_misses) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let k = 2 + i % 2;
        let n = rng.random_range(2 * k..=10);
        let lambda = [0.5, 1.0, 2.0][i % 3];
        let spec = GeneratorSpec::PerfectUniform { n, k, within_lo: lambda + 1.0, within_hi: lambda + 4.0, lambda };
        let g = spec.generate(&mut rng).unwrap();
        let planted = g.planted.unwrap();
        for _ in 0..10 {
            let ds = reweight(&g.dataset, &mut rng);
            let expected = lambda / 2.0 * (k - 1) as f64 * ds.total_weight();
            let gap = relative_gap(ratiocut_cost(&planted, &ds).unwrap().value, expected);
            worst = worst.max(gap);
            cost_misses += usize::from(gap > 1e-9);
            argmin_misses += usize::from(exact_minimize(&ds, ObjectiveSpec::new(Objective::RatioCut, k)).unwrap() != planted);
            runs += 1;
        }
    }
    Outcome::new(
        cost_misses == 0 && argmin_misses == 0,
        format!("{runs} runs, cost misses {cost_misses} (worst relative gap {worst:.1e}), argmin misses {argmin_misses}"),
    )
}

/// Perfect, separation-uniform similarity data with one cross-block value raised.
fn perturbed(n: usize, k: usize, rng: &mut LabRng) -> WeightedDataset {
    let g = GeneratorSpec::PerfectUniform { n, k, within_lo: 3.0, within_hi: 5.0, lambda: 1.0 }.generate(rng).unwrap();
    let planted = g.planted.unwrap();
    let mut rows = g.dataset.table().rows();
    let cross: Vec<(usize, usize)> =
        (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| !planted.same_cluster(i, j)).collect();
    let (i, j) = cross[rng.random_range(0..cross.len())];
    let v = 1.0 + rng.random_range(1..=16) as f64 / 8.0;
    rows[i][j] = v;
    rows[j][i] = v;
    WeightedDataset::unweighted(PairTable::from_rows(TableKind::Similarity, &rows).unwrap()).unwrap()
}

fn ratiocut_characterization() -> Outcome {
    let mut rng = lab_rng(202);
    let prober = Prober::default();
    let a = AlgorithmHandle::parse("ratiocut", None).unwrap();
    let (mut probed, mut responsive, mut robust, mut counterexamples) = (0, 0, 0, Vec::new());
    for i in 0..50 {
        let (ds, k, label) = match i % 3 {
            0 => {
                let k = 2 + (i / 3) % 2;
                let n = rng.random_range(2 * k..=8);
                let spec = GeneratorSpec::PerfectUniform { n, k, within_lo: 3.0, within_hi: 5.0, lambda: 1.0 };
                (spec.generate(&mut rng).unwrap().dataset, k, "perfectUniform")
            }
            1 => {
                let k = 2 + (i / 3) % 2;
                let n = rng.random_range(2 * k..=8);
                (perturbed(n, k, &mut rng), k, "perturbed")
            }
            _ => {
                let n = rng.random_range(4..=8);
                (generic(n, TableKind::Similarity, &mut rng), 2, "genericRandom")
            }
        };
        let handle = a.with_k(k);
        for (c, sample) in prober.range_estimate(&handle, &ds).unwrap() {
            if c.has_singleton() {
                continue;
            }
            let structured = is_perfect(&c, &ds, 0.0).unwrap().holds
                && is_separation_uniform(&c, &ds, 0.0).unwrap().detection.holds;
            let verdict = prober.responsiveness(&handle, &ds, &c, Some(&sample.weights)).unwrap();
            let is_responsive = verdict.status == VerdictStatus::Responsive;
            probed += 1;
            responsive += usize::from(is_responsive);
            robust += usize::from(structured);
            if is_responsive == structured {
                counterexamples.push(format!("{label} #{i} {c}"));
            }
        }
    }
    Outcome::new(
        counterexamples.is_empty() && probed > 0,
        format!(
            "{probed} clusterings on 50 datasets, {responsive} responsive, {robust} perfect+uniform, counterexamples {} {:?}",
            counterexamples.len(),
            counterexamples
        ),
    )
}

fn weight_separability() -> Outcome {
    let mut rng = lab_rng(303);
    let prober = Prober::default();
    let names = ["kmeans", "minsum", "kmedian", "kmedoids"];
    let (mut samples, mut failures, mut max_w) = (0, Vec::new(), 0f64);
    for i in 0..20 {
        let n = rng.random_range(5..=9);
        let ds = generic(n, TableKind::Distance, &mut rng);
        for k in [2, 3] {
            for _ in 0..3 {
                let size = rng.random_range(2..=k);
                let mut all: Vec<usize> = (0..n).collect();
                all.shuffle(&mut rng);
                let s = &all[..size];
                for name in names {
                    let a = AlgorithmHandle::parse(name, Some(k)).unwrap();
                    let sep = prober.separability(&a, &ds, s, k).unwrap();
                    samples += 1;
                    match sep.w {
                        Some(w) if sep.separated && w <= 1e9 => max_w = max_w.max(w),
                        _ => failures.push(format!("{name} dataset {i} k={k} S={s:?}")),
                    }
                }
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("{samples} samples, separated {}/{samples}, largest W needed {max_w:.0e} {failures:?}", samples - failures.len()),
    )
}

fn average_keeps_nice() -> Outcome {
    let mut rng = lab_rng(404);
    let (mut runs, mut lost) = (0, 0);
    for i in 0..20 {
        let k = 2 + i % 3;
        let n = rng.random_range((2 * k).max(5)..=10);
        let g = GeneratorSpec::NiceBlocks { n, k, gap: 0.25 + (i % 4) as f64 }.generate(&mut rng).unwrap();
        let planted = g.planted.unwrap();
        assert!(is_nice(&planted, &g.dataset, 0.0).unwrap().holds);
        for _ in 0..100 {
            let d = agglomerate(&reweight(&g.dataset, &mut rng), Linkage::Average).unwrap();
            lost += usize::from(!d.outputs(&planted));
            runs += 1;
        }
    }
    Outcome::new(lost == 0, format!("{runs} runs, planted clustering present in {}/{runs}", runs - lost))
}

fn strict_witnesses(c: &Clustering, ds: &WeightedDataset) -> Vec<(usize, usize, usize)> {
    let n = ds.n();
    let mut out = Vec::new();
    for x1 in 0..n {
        for x2 in (0..n).filter(|&x2| x2 != x1 && c.same_cluster(x1, x2)) {
            for x3 in (0..n).filter(|&x3| !c.same_cluster(x1, x3)) {
                if ds.d(x1, x3) < ds.d(x1, x2) {
                    out.push((x1, x2, x3));
                }
            }
        }
    }
    out
}

/// Doubles a spike on `set` from 100 up to 1e9 until `c` leaves the average-linkage dendrogram.
fn spike_removes(ds: &WeightedDataset, c: &Clustering, set: &[usize]) -> bool {
    let mut w = 1e2;
    while w <= 1e9 {
        let mut weights = vec![1.0; ds.n()];
        for &x in set {
            weights[x] = w;
        }
        if !agglomerate(&ds.reweighted(weights).unwrap(), Linkage::Average).unwrap().outputs(c) {
            return true;
        }
        w *= 2.0;
    }
    false
}

fn average_pair_spike() -> Outcome {
    let mut rng = lab_rng(405);
    let prober = Prober::default();
    let a = AlgorithmHandle::parse("average", None).unwrap();
    let mut cases = Vec::new();
    while cases.len() < 20 {
        let ds = generic(7, TableKind::Distance, &mut rng);
        let d = agglomerate(&ds, Linkage::Average).unwrap();
        let picks: Vec<Clustering> =
            d.clusterings().into_iter().filter(|c| !strict_witnesses(c, &ds).is_empty()).take(2).collect();
        for c in picks {
            if cases.len() < 20 {
                cases.push((ds.clone(), c));
            }
        }
    }
    let (mut pair_first, mut pair_any, mut triple, mut probe) = (0, 0, 0, 0);
    let mut misses = Vec::new();
    for (i, (ds, c)) in cases.iter().enumerate() {
        let witnesses = strict_witnesses(c, ds);
        let (x1, x2, x3) = witnesses[0];
        let first = spike_removes(ds, c, &[x1, x2]);
        let any = first || witnesses[1..].iter().any(|&(y1, y2, _)| spike_removes(ds, c, &[y1, y2]));
        pair_first += usize::from(first);
        pair_any += usize::from(any);
        triple += usize::from(spike_removes(ds, c, &[x1, x2, x3]));
        let v = prober.responsiveness(&a, ds, c, None).unwrap();
        probe += usize::from(v.status == VerdictStatus::Responsive);
        if !any {
            misses.push(format!("case {i} {c}"));
        }
    }
    Outcome::new(
        pair_any == cases.len(),
        format!(
            "{} reachable non-nice clusterings: pair spike on first witness {pair_first}/20, on some witness {pair_any}/20; \
             triple spike on first witness {triple}/20; full probe responsive {probe}/20; pair misses {misses:?}",
            cases.len()
        ),
    )
}

fn weight_robustness() -> Outcome {
    let mut rng = lab_rng(505);
    let (mut comparisons, mut differences) = (0, 0);
    for _ in 0..20 {
        let n = rng.random_range(5..=9);
        let ds = generic(n, TableKind::Distance, &mut rng);
        let fingerprint = |ds: &WeightedDataset| {
            let mut out = Vec::new();
            for l in [Linkage::Single, Linkage::Complete] {
                let d = agglomerate(ds, l).unwrap();
                let heights: Vec<String> = d.merge_heights().iter().map(|h| format!("{:?}", h.map(f64::to_bits))).collect();
                out.push(format!("{}|{}", d.to_newick(), heights.join(",")));
            }
            for objective in [Objective::MinDiameter, Objective::KCenter] {
                for k in [2, 3] {
                    out.push(format!("{:?}", exact_minimize(ds, ObjectiveSpec::new(objective, k)).unwrap().labels()));
                }
            }
            out
        };
        let base = fingerprint(&ds);
        for _ in 0..100 {
            let other = fingerprint(&reweight(&ds, &mut rng));
            comparisons += base.len();
            differences += base.iter().zip(&other).filter(|(a, b)| a != b).count();
        }
    }
    Outcome::new(differences == 0, format!("{comparisons} output comparisons, differences {differences}"))
}

fn ward_and_divisive() -> Outcome {
    let mut rng = lab_rng(606);
    let prober = Prober::default();
    let mut datasets = Vec::new();
    for i in 0..12 {
        let n = 5 + i % 3;
        datasets.push(if i % 4 == 3 {
            GeneratorSpec::NiceBlocks { n, k: 2, gap: 1.0 }.generate(&mut rng).unwrap().dataset
        } else {
            generic(n, TableKind::Distance, &mut rng)
        });
    }
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["ward", "divisive(kmeans)"] {
        let a = AlgorithmHandle::parse(name, None).unwrap();
        let mut counts = EvidenceCounts::default();
        let mut outputs_probed = 0;
        for (i, ds) in datasets.iter().enumerate() {
            let evidence = prober.probe_dataset(&a, ds, i).unwrap();
            outputs_probed += usize::from(!evidence.verdicts.is_empty());
            counts += evidence.counts;
        }
        pass &= counts.certified == 0 && counts.inconclusive == 0 && counts.responsive > 0 && outputs_probed == datasets.len();
        parts.push(format!(
            "{name}: responsive {}, certificates {}, inconclusive {}",
            counts.responsive, counts.certified, counts.inconclusive
        ));
    }
    Outcome::new(pass, format!("{} datasets; {}", datasets.len(), parts.join("; ")))
}

fn integer_weights(n: usize, rng: &mut LabRng) -> Vec<f64> {
    loop {
        let w: Vec<u32> = (0..n).map(|_| rng.random_range(1..=4)).collect();
        if w.iter().sum::<u32>() <= 12 {
            return w.into_iter().map(f64::from).collect();
        }
    }
}

/// Random similarities in `(0, 1]` off the diagonal and 2 on it.
fn self_similar(n: usize, rng: &mut LabRng) -> PairTable {
    let mut rows = vec![vec![2.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(1..=1024u32) as f64 / 1024.0;
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    PairTable::from_rows(TableKind::Similarity, &rows).unwrap()
}

fn duplicate_equivalence() -> Outcome {
    let mut rng = lab_rng(707);
    let (mut checks, mut mismatches) = (0, Vec::new());
    for i in 0..20 {
        let n = rng.random_range(3..=7);
        let weights = integer_weights(n, &mut rng);
        let coords = generic(n, TableKind::Distance, &mut rng).reweighted(weights.clone()).unwrap();
        let similar = WeightedDataset::unweighted(self_similar(n, &mut rng)).unwrap().reweighted(weights).unwrap();
        for objective in Objective::ALL {
            let ds = if objective == Objective::RatioCut { &similar } else { &coords };
            let expanded = expand(ds).unwrap();
            for k in [2, 3].into_iter().filter(|&k| k < n) {
                let spec = ObjectiveSpec::new(objective, k);
                let weighted = exact_minimize(ds, spec).unwrap().lift(&expanded.origin).unwrap();
                let unweighted = exact_minimize(&expanded.dataset, spec).unwrap();
                checks += 1;
                if weighted != unweighted {
                    mismatches.push(format!("{} dataset {i} k={k}", objective.name()));
                }
            }
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        format!("{checks} comparisons over {} objectives, agreement {}/{checks} {mismatches:?}", Objective::ALL.len(), checks - mismatches.len()),
    )
}

fn centroid_cost(c: &Clustering, ds: &WeightedDataset) -> f64 {
    let coords = ds.coords().unwrap();
    let dim = coords[0].len();
    let mut total = 0.0;
    for block in c.blocks() {
        let mass: f64 = block.iter().map(|&x| ds.weight(x)).sum();
        let centre: Vec<f64> =
            (0..dim).map(|t| block.iter().map(|&x| ds.weight(x) * coords[x][t]).sum::<f64>() / mass).collect();
        for &x in &block {
            let sq: f64 = (0..dim).map(|t| (coords[x][t] - centre[t]).powi(2)).sum();
            total += ds.weight(x) * sq;
        }
    }
    total
}

fn kmeans_centroid() -> Outcome {
    let mut rng = lab_rng(808);
    let (mut misses, mut worst) = (0, 0f64);
    for _ in 0..1000 {
        let n = rng.random_range(3..=9);
        let dim = rng.random_range(1..=3);
        let coords: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
        let ds = WeightedDataset::from_coords(coords, log_uniform(n, 1e-2, 1e2, &mut rng)).unwrap();
        let c = loop {
            let k = rng.random_range(2..n);
            let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            if let Ok(c) = Clustering::from_labels(&labels) {
                break c;
            }
        };
        let gap = relative_gap(kmeans_cost(&c, &ds).unwrap().value, centroid_cost(&c, &ds));
        worst = worst.max(gap);
        misses += usize::from(gap > 1e-9);
    }
    Outcome::new(misses == 0, format!("1000 pairs, misses {misses}, worst relative gap {worst:.1e}"))
}

fn default_grid() -> Outcome {
    let report = commands::classify(&ExperimentConfig::default(), Path::new(".")).unwrap();
    let expected: [(Category, &[&str], &[&str]); 4] = [
        (Category::Sensitive, &["kmeans", "kmedian", "kmedoids", "minsum"], &["ward", "divisive(kmeans)"]),
        (Category::Considering, &["ratiocut"], &["average"]),
        (Category::Robust, &["mindiameter", "kcenter"], &["single", "complete"]),
        (Category::Undetermined, &[], &[]),
    ];
    let grid = report.grid();
    let mut pass = grid.len() == expected.len() && report.reports.len() == 12;
    let mut cells = Vec::new();
    for ((cat, partitional, hierarchical), (want_cat, want_p, want_h)) in grid.iter().zip(expected) {
        let sorted = |v: &[String]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        let want = |v: &[&str]| {
            let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            v.sort();
            v
        };
        pass &= *cat == want_cat && sorted(partitional) == want(want_p) && sorted(hierarchical) == want(want_h);
        cells.push(format!("{}: [{}] | [{}]", cat.as_str(), partitional.join(", "), hierarchical.join(", ")));
    }
    Outcome::new(pass, cells.join("; "))
}
