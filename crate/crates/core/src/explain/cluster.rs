//! Seeded k-means and the error-covariation report built on it.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Label};
use crate::scalar::{self, Scalar};
use crate::store::Collection;

pub const MAX_ITERATIONS: usize = 300;
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct KMeans<T> {
    pub centroids: Vec<Vec<T>>,
    pub assignments: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

/// Index of the nearest centroid; ties go to the lowest index.
fn nearest<T: Scalar>(point: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, scalar::squared_euclidean(point, &centroids[0]));
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = scalar::squared_euclidean(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding drawn from a ChaCha8 stream seeded with `seed`.
fn seed_centroids<T: Scalar>(points: &[&[T]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let n = points.len();
    let mut chosen = vec![rng.random_range(0..n)];
    while chosen.len() < k {
        let centroids: Vec<Vec<T>> = chosen.iter().map(|&i| points[i].to_vec()).collect();
        let weights: Vec<f64> = points.iter().map(|p| nearest(p, &centroids).1.as_f64()).collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, w) in weights.iter().enumerate() {
                if *w <= 0.0 {
                    continue;
                }
                acc += w;
                if acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave `target` at the very top of the range.
            pick.unwrap_or_else(|| weights.iter().rposition(|w| *w > 0.0).expect("positive total"))
        } else {
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(next);
    }
    chosen.iter().map(|&i| points[i].to_vec()).collect()
}

/// Lloyd iterations from k-means++ seeds, capped at [`MAX_ITERATIONS`] and
/// stopped once no centroid moves further than `tolerance`. An empty cluster
/// is re-seeded with the point farthest from its assigned centroid.
pub fn kmeans<T: Scalar>(points: &[&[T]], k: usize, seed: u64, tolerance: T) -> Result<KMeans<T>> {
    if k < 2 {
        return Err(Error::KBelowTwo);
    }
    if points.len() < k {
        return Err(Error::FewerPointsThanK {
            points: points.len(),
            k,
        });
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(points, k, &mut rng);
    let mut assignments = vec![0usize; points.len()];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut dists = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            assignments[i] = c;
            dists.push(d);
        }
        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignments) {
            counts[c] += 1;
            for (s, &v) in sums[c].iter_mut().zip(p.iter()) {
                *s = *s + v;
            }
        }
        let mut next = Vec::with_capacity(k);
        for c in 0..k {
            if counts[c] > 0 {
                let n = T::of_usize(counts[c]);
                next.push(sums[c].iter().map(|&s| s / n).collect::<Vec<T>>());
            } else {
                let far = dists
                    .iter()
                    .enumerate()
                    .fold(0, |best, (i, &d)| if d > dists[best] { i } else { best });
                dists[far] = T::neg_infinity();
                next.push(points[far].to_vec());
            }
        }
        let shift = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| scalar::euclidean(a, b))
            .fold(T::zero(), T::max);
        centroids = next;
        if shift <= tolerance {
            converged = true;
            break;
        }
    }
    for (i, p) in points.iter().enumerate() {
        assignments[i] = nearest(p, &centroids).0;
    }
    Ok(KMeans {
        centroids,
        assignments,
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ClusterReport<T> {
    pub assignments: BTreeMap<String, usize>,
    pub centroids: Vec<Vec<T>>,
    pub sizes: Vec<usize>,
    pub per_cluster_error_rate: Vec<T>,
    pub global_error_rate: T,
    /// Cluster error rate over global error rate; `None` when the global rate is zero.
    pub lifts: Vec<Option<T>>,
    pub iterations: usize,
    pub converged: bool,
}

/// Whether the stored prediction misses the label. Numeric pairs compare
/// with an absolute tolerance; anything else compares class keys.
pub fn is_error<T: Scalar>(inst: &Instance<T>, tolerance: T) -> Result<bool> {
    let label = inst.require_label()?;
    let pred = inst
        .prediction
        .as_ref()
        .ok_or_else(|| Error::MissingLabels(inst.id.clone()))?;
    Ok(match (label, pred) {
        (Label::Num(l), Label::Num(p)) => (*l - *p).abs() > tolerance,
        (l, p) => l.class_key() != p.class_key(),
    })
}

/// Clusters the embeddings and reports how model errors concentrate per cluster.
pub fn cluster_covariation<T: Scalar>(
    collection: &Collection<T>,
    k_clusters: usize,
    seed: u64,
    error_tolerance: T,
) -> Result<ClusterReport<T>> {
    let instances: Vec<&Instance<T>> = collection.iter().collect();
    let errors = instances
        .iter()
        .map(|i| is_error(i, error_tolerance))
        .collect::<Result<Vec<bool>>>()?;
    let points: Vec<&[T]> = instances.iter().map(|i| i.embedding.as_slice()).collect();
    let km = kmeans(&points, k_clusters, seed, T::of(CONVERGENCE_TOLERANCE))?;

    let mut sizes = vec![0usize; k_clusters];
    let mut wrong = vec![0usize; k_clusters];
    for (&c, &e) in km.assignments.iter().zip(&errors) {
        sizes[c] += 1;
        wrong[c] += usize::from(e);
    }
    let global = T::of_usize(errors.iter().filter(|e| **e).count()) / T::of_usize(errors.len());
    let per_cluster: Vec<T> = sizes
        .iter()
        .zip(&wrong)
        .map(|(&n, &w)| if n == 0 { T::zero() } else { T::of_usize(w) / T::of_usize(n) })
        .collect();
    let lifts = per_cluster
        .iter()
        .map(|&r| (global > T::zero()).then(|| r / global))
        .collect();
    Ok(ClusterReport {
        assignments: instances
            .iter()
            .zip(&km.assignments)
            .map(|(i, &c)| (i.id.clone(), c))
            .collect(),
        centroids: km.centroids,
        sizes,
        per_cluster_error_rate: per_cluster,
        global_error_rate: global,
        lifts,
        iterations: km.iterations,
        converged: km.converged,
    })
}
