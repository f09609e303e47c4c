//! Seeded dataset generators with planted structure.
//!
//! Every generator draws from [`LabRng`] (ChaCha8) and rounds coordinates and
//! similarities to multiples of 1/1024, so generated values are exact in
//! binary floating point and survive decimal round trips.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::model::{validate_dataset, Clustering, PairTable, TableKind, WeightedDataset};

/// The single random number generator used throughout the crate.
pub type LabRng = rand_chacha::ChaCha8Rng;

pub fn lab_rng(seed: u64) -> LabRng {
    LabRng::seed_from_u64(seed)
}

const GRID: f64 = 1024.0;

fn quantize(x: f64) -> f64 {
    libm::round(x * GRID) / GRID
}

/// Smallest pairwise distance between generic random points.
const MIN_SEPARATION: f64 = 0.05;

/// A generated dataset and, when the generator plants one, its clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub dataset: WeightedDataset,
    pub planted: Option<Clustering>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Similarity blocks of size at least two: within-block values drawn from
    /// `[within_lo, within_hi]`, every cross-block value exactly `lambda`.
    PerfectUniform { n: usize, k: usize, within_lo: f64, within_hi: f64, lambda: f64 },
    /// Planar point blocks whose within-block distances are all below every
    /// cross-block distance; the distance between blocks is at least `1 + gap`.
    NiceBlocks { n: usize, k: usize, gap: f64 },
    /// Unstructured data: random planar points (distance) or random
    /// similarities in `(0, 1]` (similarity).
    GenericRandom { n: usize, kind: TableKind },
    /// Points on the real line, unit weights.
    Line { positions: Vec<f64> },
}

impl GeneratorSpec {
    pub fn name(&self) -> String {
        match self {
            GeneratorSpec::PerfectUniform { n, k, within_lo, within_hi, lambda } => {
                format!("perfectUniform(n={n},k={k},within=[{within_lo},{within_hi}],lambda={lambda})")
            }
            GeneratorSpec::NiceBlocks { n, k, gap } => format!("niceBlocks(n={n},k={k},gap={gap})"),
            GeneratorSpec::GenericRandom { n, kind } => format!("genericRandom(n={n},kind={kind})"),
            GeneratorSpec::Line { positions } => format!("line({positions:?})"),
        }
    }

    pub fn kind(&self) -> TableKind {
        match self {
            GeneratorSpec::PerfectUniform { .. } => TableKind::Similarity,
            GeneratorSpec::GenericRandom { kind, .. } => *kind,
            _ => TableKind::Distance,
        }
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> Result<Generated> {
        match *self {
            GeneratorSpec::PerfectUniform { n, k, within_lo, within_hi, lambda } => {
                perfect_uniform(n, k, within_lo, within_hi, lambda, rng)
            }
            GeneratorSpec::NiceBlocks { n, k, gap } => nice_blocks(n, k, gap, rng),
            GeneratorSpec::GenericRandom { n, kind } => generic_random(n, kind, rng),
            GeneratorSpec::Line { ref positions } => {
                let coords = positions.iter().map(|&p| vec![p]).collect();
                let dataset = WeightedDataset::from_coords(coords, vec![1.0; positions.len()])?;
                Ok(Generated { dataset, planted: None })
            }
        }
    }
}

/// Shuffled block labels with sizes as equal as possible.
fn planted_labels<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    labels.shuffle(rng);
    labels
}

fn perfect_uniform<R: Rng>(
    n: usize,
    k: usize,
    within_lo: f64,
    within_hi: f64,
    lambda: f64,
    rng: &mut R,
) -> Result<Generated> {
    if k < 2 || n < 2 * k {
        return Err(Error::InfeasibleGenerator(format!("need k >= 2 and n >= 2k, got n={n} k={k}")));
    }
    if lambda.is_nan() || lambda < 0.0 || within_lo.is_nan() || within_lo <= lambda || within_hi.is_nan() || within_hi < within_lo {
        return Err(Error::InfeasibleGenerator(format!(
            "need 0 <= lambda < within_lo <= within_hi, got lambda={lambda} within=[{within_lo},{within_hi}]"
        )));
    }
    let labels = planted_labels(n, k, rng);
    let steps = libm::floor((within_hi - within_lo) * GRID) as u64;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = if labels[i] == labels[j] {
                within_lo + rng.random_range(0..=steps) as f64 / GRID
            } else {
                lambda
            };
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    let table = PairTable::from_flat(TableKind::Similarity, n, values)?;
    let dataset = validate_dataset(table, vec![1.0; n])?;
    Ok(Generated { dataset, planted: Some(Clustering::from_labels(&labels)?) })
}

fn nice_blocks<R: Rng>(n: usize, k: usize, gap: f64, rng: &mut R) -> Result<Generated> {
    if k < 2 || n <= k {
        return Err(Error::InfeasibleGenerator(format!("need 2 <= k < n, got n={n} k={k}")));
    }
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::InfeasibleGenerator(format!("gap must be positive, got {gap}")));
    }
    // Points lie in discs of radius 0.45 (diameter < 1 after rounding) whose
    // centers are 2 + gap apart.
    let labels = planted_labels(n, k, rng);
    let spacing = 2.0 + gap;
    let mut coords: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &block in &labels {
        loop {
            let (dx, dy) = (rng.random_range(-0.45..=0.45), rng.random_range(-0.45..=0.45));
            if dx * dx + dy * dy > 0.45 * 0.45 {
                continue;
            }
            let p = vec![quantize(block as f64 * spacing + dx), quantize(dy)];
            if coords.iter().all(|q| q != &p) {
                coords.push(p);
                break;
            }
        }
    }
    let dataset = WeightedDataset::from_coords(coords, vec![1.0; n])?;
    Ok(Generated { dataset, planted: Some(Clustering::from_labels(&labels)?) })
}

fn generic_random<R: Rng>(n: usize, kind: TableKind, rng: &mut R) -> Result<Generated> {
    if n < 3 {
        return Err(Error::InfeasibleGenerator(format!("need n >= 3, got {n}")));
    }
    let dataset = match kind {
        TableKind::Distance => {
            if n > 200 {
                return Err(Error::InfeasibleGenerator(format!("at most 200 separated points, got {n}")));
            }
            let mut coords: Vec<Vec<f64>> = Vec::with_capacity(n);
            while coords.len() < n {
                let p = vec![quantize(rng.random_range(0.0..1.0)), quantize(rng.random_range(0.0..1.0))];
                let far = coords
                    .iter()
                    .all(|q| libm::hypot(p[0] - q[0], p[1] - q[1]) >= MIN_SEPARATION);
                if far {
                    coords.push(p);
                }
            }
            WeightedDataset::from_coords(coords, vec![1.0; n])?
        }
        TableKind::Similarity => {
            let mut values = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = rng.random_range(1..=1024u32) as f64 / GRID;
                    values[i * n + j] = v;
                    values[j * n + i] = v;
                }
            }
            validate_dataset(PairTable::from_flat(TableKind::Similarity, n, values)?, vec![1.0; n])?
        }
    };
    Ok(Generated { dataset, planted: None })
}
