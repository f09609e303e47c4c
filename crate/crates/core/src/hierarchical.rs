//! Agglomerative clustering under a pluggable linkage, and divisive clustering
//! driven by any partitional algorithm.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Clustering, Dendrogram, WeightedDataset};
use crate::numeric::CompensatedSum;

/// Linkage values within this relative distance of the smallest one are ties.
pub const LINKAGE_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Linkage {
    Single,
    Complete,
    Average,
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 4] = [Linkage::Single, Linkage::Complete, Linkage::Average, Linkage::Ward];

    pub fn name(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
            Linkage::Ward => "ward",
        }
    }

    pub fn requires_coords(self) -> bool {
        self == Linkage::Ward
    }

    /// Single and complete linkage only compare distances.
    pub fn is_weight_free(self) -> bool {
        matches!(self, Linkage::Single | Linkage::Complete)
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Linkage::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnsupportedInput { algorithm: s.into(), reason: "unknown linkage" })
    }
}

/// Weighted center of mass of a set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    pub position: Vec<f64>,
    pub mass: f64,
}

impl Centroid {
    pub fn of(members: &[usize], ds: &WeightedDataset) -> Result<Self> {
        let coords = ds.coords().ok_or(Error::MissingCoords)?;
        let dim = coords.first().map_or(0, Vec::len);
        let mass: f64 = members.iter().map(|&x| ds.weight(x)).sum();
        let position = (0..dim)
            .map(|axis| {
                let s: CompensatedSum = members.iter().map(|&x| coords[x][axis] * ds.weight(x)).collect();
                s.value() / mass
            })
            .collect();
        Ok(Self { position, mass })
    }

    pub fn merge(&self, other: &Self) -> Self {
        let mass = self.mass + other.mass;
        let position = self
            .position
            .iter()
            .zip(&other.position)
            .map(|(a, b)| (a * self.mass + b * other.mass) / mass)
            .collect();
        Self { position, mass }
    }

    /// Increase in k-means cost from merging the two clusters.
    pub fn ward_cost(&self, other: &Self) -> f64 {
        let sq: f64 = self.position.iter().zip(&other.position).map(|(a, b)| (a - b) * (a - b)).sum();
        self.mass * other.mass * sq / (self.mass + other.mass)
    }
}

/// Linkage between two disjoint, non-empty element sets.
pub fn linkage_value(linkage: Linkage, a: &[usize], b: &[usize], ds: &WeightedDataset) -> Result<f64> {
    if a.is_empty() || b.is_empty() || a.iter().any(|x| b.contains(x)) {
        return Err(Error::InvalidClustering("linkage needs two disjoint non-empty sets".into()));
    }
    let pairs = || a.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y)));
    Ok(match linkage {
        Linkage::Single => pairs().map(|(x, y)| ds.d(x, y)).fold(f64::INFINITY, f64::min),
        Linkage::Complete => pairs().map(|(x, y)| ds.d(x, y)).fold(0.0, f64::max),
        Linkage::Average => {
            let s: CompensatedSum = pairs().map(|(x, y)| ds.d(x, y) * ds.weight(x) * ds.weight(y)).collect();
            let wa: f64 = a.iter().map(|&x| ds.weight(x)).sum();
            let wb: f64 = b.iter().map(|&x| ds.weight(x)).sum();
            s.value() / (wa * wb)
        }
        Linkage::Ward => Centroid::of(a, ds)?.ward_cost(&Centroid::of(b, ds)?),
    })
}

/// Bottom-up clustering: repeatedly merges the pair of current clusters with
/// the smallest linkage value.
///
/// Ties (within [`LINKAGE_TIE_TOLERANCE`]) go to the pair whose smallest
/// members are lexicographically smallest, comparing the cluster holding the
/// smaller minimum first. Runs in `O(n^3)`.
pub fn agglomerate(ds: &WeightedDataset, linkage: Linkage) -> Result<Dendrogram> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::InvalidDendrogram(alloc::format!("cannot build a hierarchy over {n} element(s)")));
    }
    if linkage.requires_coords() && ds.coords().is_none() {
        return Err(Error::MissingCoords);
    }

    // Slot i holds the cluster whose smallest member is i.
    let mut node: Vec<usize> = (0..n).collect();
    let mut mass: Vec<f64> = ds.weights().to_vec();
    let mut centroids: Vec<Centroid> = match linkage {
        Linkage::Ward => (0..n).map(|i| Centroid::of(&[i], ds)).collect::<Result<_>>()?,
        _ => Vec::new(),
    };
    // Cross sums of d * w * w, only used by average linkage.
    let mut sums: Vec<f64> = Vec::new();
    let mut value = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = match linkage {
                Linkage::Single | Linkage::Complete => ds.d(i, j),
                Linkage::Average => ds.d(i, j),
                Linkage::Ward => centroids[i].ward_cost(&centroids[j]),
            };
            value[i * n + j] = v;
            value[j * n + i] = v;
        }
    }
    if linkage == Linkage::Average {
        sums = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                sums[i * n + j] = ds.d(i, j) * ds.weight(i) * ds.weight(j);
            }
        }
    }

    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n - 1);
    while active.len() > 1 {
        let mut min = f64::INFINITY;
        for (p, &i) in active.iter().enumerate() {
            for &j in &active[p + 1..] {
                min = min.min(value[i * n + j]);
            }
        }
        let (a, b) = active
            .iter()
            .enumerate()
            .flat_map(|(p, &i)| active[p + 1..].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| value[i * n + j] - min <= LINKAGE_TIE_TOLERANCE * min.abs())
            .expect("at least two active clusters");

        merges.push((node[a], node[b], Some(min)));
        node[a] = n + merges.len() - 1;
        mass[a] += mass[b];
        active.retain(|&s| s != b);
        if linkage == Linkage::Ward {
            centroids[a] = centroids[a].merge(&centroids[b]);
        }
        for &c in &active {
            if c == a {
                continue;
            }
            let v = match linkage {
                Linkage::Single => value[a * n + c].min(value[b * n + c]),
                Linkage::Complete => value[a * n + c].max(value[b * n + c]),
                Linkage::Average => {
                    let s = sums[a * n + c] + sums[b * n + c];
                    sums[a * n + c] = s;
                    sums[c * n + a] = s;
                    s / (mass[a] * mass[c])
                }
                Linkage::Ward => centroids[a].ward_cost(&centroids[c]),
            };
            value[a * n + c] = v;
            value[c * n + a] = v;
        }
    }
    Dendrogram::from_merges(n, &merges)
}

/// A partitional clustering algorithm, as consumed by [`divisive`].
pub trait Partitioner {
    fn partition(&self, ds: &WeightedDataset, k: usize) -> Result<Clustering>;
}

impl<F> Partitioner for F
where
    F: Fn(&WeightedDataset, usize) -> Result<Clustering>,
{
    fn partition(&self, ds: &WeightedDataset, k: usize) -> Result<Clustering> {
        self(ds, k)
    }
}

/// Top-down clustering: every node with at least three elements is split by
/// `p` with `k = 2` on its own sub-dataset; two-element nodes split into
/// singletons.
pub fn divisive<P: Partitioner + ?Sized>(ds: &WeightedDataset, p: &P) -> Result<Dendrogram> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::InvalidDendrogram(alloc::format!("cannot build a hierarchy over {n} element(s)")));
    }
    let mut merges = Vec::with_capacity(n - 1);
    let members: Vec<usize> = (0..n).collect();
    split(ds, p, &members, &mut merges)?;
    Dendrogram::from_merges(n, &merges)
}

fn split<P: Partitioner + ?Sized>(
    ds: &WeightedDataset,
    p: &P,
    members: &[usize],
    merges: &mut Vec<(usize, usize, Option<f64>)>,
) -> Result<usize> {
    let n = ds.n();
    let (left, right) = match members {
        [x] => return Ok(*x),
        [x, y] => (*x, *y),
        _ => {
            let sub = ds.restrict(members);
            let c = p.partition(&sub, 2)?;
            if c.k() != 2 || c.n() != members.len() {
                return Err(Error::BadSplit { got: c.k() });
            }
            // Block 0 holds the smallest member, so recursion runs left to right.
            let blocks = c.blocks();
            let map = |b: &Vec<usize>| b.iter().map(|&i| members[i]).collect::<Vec<_>>();
            let l = split(ds, p, &map(&blocks[0]), merges)?;
            let r = split(ds, p, &map(&blocks[1]), merges)?;
            (l, r)
        }
    };
    merges.push((left, right, None));
    Ok(n + merges.len() - 1)
}
