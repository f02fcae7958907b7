//! Model-agnostic global effects: permutation importance and partial dependence.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FeatureMap, Instance};
use crate::scalar::{self, Scalar};

/// A prediction function over named raw features.
pub trait Model<T> {
    fn predict(&self, features: &FeatureMap<T>) -> T;
}

impl<T, F> Model<T> for F
where
    F: Fn(&FeatureMap<T>) -> T,
{
    fn predict(&self, features: &FeatureMap<T>) -> T {
        self(features)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImportanceMetric {
    /// Share of exact matches between prediction and numeric label.
    Accuracy,
    /// Mean absolute error.
    Mae,
}

impl ImportanceMetric {
    fn score<T: Scalar>(self, predictions: &[T], labels: &[T]) -> T {
        let n = T::of_usize(labels.len());
        match self {
            ImportanceMetric::Accuracy => {
                T::of_usize(predictions.iter().zip(labels).filter(|(p, l)| p == l).count()) / n
            }
            ImportanceMetric::Mae => {
                predictions.iter().zip(labels).map(|(&p, &l)| (p - l).abs()).sum::<T>() / n
            }
        }
    }

    /// Degradation caused by shuffling: positive when the feature matters.
    fn drop<T: Scalar>(self, baseline: T, shuffled: T) -> T {
        match self {
            ImportanceMetric::Accuracy => baseline - shuffled,
            ImportanceMetric::Mae => shuffled - baseline,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Importance<T> {
    pub mean: T,
    /// Population standard deviation across repeats.
    pub std: T,
}

fn feature_names<T: Scalar>(instances: &[&Instance<T>]) -> Result<Vec<String>> {
    let first = instances.first().ok_or(Error::EmptyCollection)?;
    let names: Vec<String> = first.features.keys().cloned().collect();
    for inst in instances {
        for name in &names {
            inst.require_feature(name)?;
        }
    }
    Ok(names)
}

/// Mean and spread of the metric degradation when each feature column is
/// shuffled with a seeded permutation, over `repeats` shuffles.
pub fn permutation_importance<T: Scalar>(
    instances: &[&Instance<T>],
    model: &dyn Model<T>,
    metric: ImportanceMetric,
    repeats: usize,
    seed: u64,
) -> Result<BTreeMap<String, Importance<T>>> {
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let names = feature_names(instances)?;
    let labels = instances
        .iter()
        .map(|i| {
            i.require_label()?
                .as_num()
                .ok_or_else(|| Error::NonNumericLabel(i.id.clone()))
        })
        .collect::<Result<Vec<T>>>()?;
    let rows: Vec<FeatureMap<T>> = instances.iter().map(|i| i.features.clone()).collect();
    let baseline_preds: Vec<T> = rows.iter().map(|r| model.predict(r)).collect();
    let baseline = metric.score(&baseline_preds, &labels);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    let mut perm: Vec<usize> = (0..rows.len()).collect();
    for name in names {
        let column: Vec<T> = rows.iter().map(|r| r[&name]).collect();
        let mut drops = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            perm.shuffle(&mut rng);
            let preds: Vec<T> = rows
                .iter()
                .zip(&perm)
                .map(|(row, &src)| {
                    let mut row = row.clone();
                    row.insert(name.clone(), column[src]);
                    model.predict(&row)
                })
                .collect();
            drops.push(metric.drop(baseline, metric.score(&preds, &labels)));
        }
        let mean = scalar::mean(&drops).expect("repeats >= 1");
        let std = scalar::std_dev(&drops).expect("repeats >= 1");
        out.insert(name, Importance { mean, std });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PdpPoint<T> {
    pub value: T,
    pub mean_prediction: T,
}

/// Partial dependence of the model on `feature` over an evenly spaced grid
/// spanning the observed range.
pub fn pdp_curve<T: Scalar>(
    instances: &[&Instance<T>],
    model: &dyn Model<T>,
    feature: &str,
    grid_points: usize,
) -> Result<Vec<PdpPoint<T>>> {
    if grid_points < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    if instances.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut observed = Vec::with_capacity(instances.len());
    for inst in instances {
        observed.push(
            *inst
                .features
                .get(feature)
                .ok_or_else(|| Error::UnknownFeature(feature.to_owned()))?,
        );
    }
    let lo = observed.iter().copied().fold(T::infinity(), T::min);
    let hi = observed.iter().copied().fold(T::neg_infinity(), T::max);
    let steps = T::of_usize(grid_points - 1);
    let n = T::of_usize(instances.len());
    Ok((0..grid_points)
        .map(|g| {
            let value = if g == grid_points - 1 {
                hi
            } else {
                lo + (hi - lo) * T::of_usize(g) / steps
            };
            let total: T = instances
                .iter()
                .map(|inst| {
                    let mut row = inst.features.clone();
                    row.insert(feature.to_owned(), value);
                    model.predict(&row)
                })
                .sum();
            PdpPoint {
                value,
                mean_prediction: total / n,
            }
        })
        .collect())
}
