//! Shapley attributions for a k-nearest-neighbour predictor over raw features.
//!
//! The coalition value `v(S)` is the kNN prediction when distances only use
//! the features in `S`, rescaled by `d/|S|` so that distances stay comparable
//! across coalition sizes. `v(∅)` is the mean prediction over the candidate
//! instances.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::knn::{aggregate, PredictMode, Prediction};
use crate::error::{Error, Result};
use crate::model::{Instance, Label};
use crate::scalar::{self, Scalar};
use crate::store::Collection;

pub const DEFAULT_MAX_EXACT_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ShapleyConfig<T> {
    pub k: usize,
    pub mode: PredictMode,
    /// Largest feature count enumerated exactly.
    pub max_exact_dim: usize,
    /// Permutation samples used above `max_exact_dim`; `None` makes that an error.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Divide each feature difference by the feature's population standard
    /// deviation over the candidates.
    pub standardize: bool,
    /// Class whose vote fraction is attributed; defaults to the predicted class.
    pub target_class: Option<Label<T>>,
}

impl<T> ShapleyConfig<T> {
    pub fn new(k: usize, mode: PredictMode) -> Self {
        ShapleyConfig {
            k,
            mode,
            max_exact_dim: DEFAULT_MAX_EXACT_DIM,
            samples: None,
            seed: 0,
            standardize: false,
            target_class: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct AttributionResult<T> {
    pub per_feature: BTreeMap<String, T>,
    pub base_value: T,
    pub prediction: T,
    /// Whether every coalition was enumerated.
    pub exact: bool,
}

impl<T: Scalar> AttributionResult<T> {
    /// `|Σ φ + base − prediction|`.
    pub fn efficiency_gap(&self) -> T {
        (self.per_feature.values().copied().sum::<T>() + self.base_value - self.prediction).abs()
    }
}

struct Game<'a, T> {
    ids: Vec<&'a str>,
    labels: Vec<&'a Label<T>>,
    /// `diffs[i][j]`: squared (scaled) difference of feature `j` for candidate `i`.
    diffs: Vec<Vec<T>>,
    d: usize,
    k: usize,
    mode: PredictMode,
    target: Option<Label<T>>,
}

impl<T: Scalar> Game<'_, T> {
    fn predict(&self, mask: u64) -> Result<Prediction<T>> {
        let size = mask.count_ones() as usize;
        let scale = T::of_usize(self.d) / T::of_usize(size);
        let mut ranked: Vec<(T, usize)> = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let sum = (0..self.d)
                    .filter(|j| mask & (1 << j) != 0)
                    .fold(T::zero(), |acc, j| acc + row[j]);
                ((scale * sum).sqrt(), i)
            })
            .collect();
        ranked.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| self.ids[a.1].cmp(self.ids[b.1]))
        });
        aggregate(
            ranked.iter().take(self.k).map(|&(_, i)| (self.ids[i], self.labels[i])),
            self.mode,
        )
    }

    fn value(&self, mask: u64) -> Result<T> {
        if mask == 0 {
            return self.base_value();
        }
        Ok(self.predict(mask)?.value_for(self.target.as_ref()))
    }

    fn base_value(&self) -> Result<T> {
        let n = T::of_usize(self.labels.len());
        match self.mode {
            PredictMode::Regress => {
                let mut sum = T::zero();
                for (id, l) in self.ids.iter().zip(&self.labels) {
                    sum = sum + l.as_num().ok_or_else(|| Error::NonNumericLabel((*id).to_owned()))?;
                }
                Ok(sum / n)
            }
            PredictMode::Classify => {
                let key = self
                    .target
                    .as_ref()
                    .expect("classification target resolved before valuation")
                    .class_key();
                let hits = self.labels.iter().filter(|l| l.class_key() == key).count();
                Ok(T::of_usize(hits) / n)
            }
        }
    }
}

/// Exact (all `2^d` coalitions) or permutation-sampled Shapley values of the
/// query's features for a kNN predictor over the collection.
///
/// A stored instance with the query's id is left out of the candidates.
pub fn knn_shapley<T: Scalar>(
    collection: &Collection<T>,
    query: &Instance<T>,
    config: &ShapleyConfig<T>,
) -> Result<AttributionResult<T>> {
    if config.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let names: Vec<&String> = query.features.keys().collect();
    let d = names.len();
    if d == 0 {
        return Err(Error::InvalidArgument("query has no features".into()));
    }
    if d > 63 {
        return Err(Error::InvalidArgument("at most 63 features are supported".into()));
    }
    let exact = d <= config.max_exact_dim;
    if !exact && config.samples.is_none() {
        return Err(Error::TooManyFeaturesForExact {
            features: d,
            max: config.max_exact_dim,
        });
    }

    let candidates: Vec<&Instance<T>> = collection.iter().filter(|i| i.id != query.id).collect();
    if candidates.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut columns: Vec<Vec<T>> = vec![Vec::with_capacity(candidates.len()); d];
    let mut labels = Vec::with_capacity(candidates.len());
    for inst in &candidates {
        labels.push(inst.require_label()?);
        for (j, name) in names.iter().enumerate() {
            columns[j].push(inst.require_feature(name)?);
        }
    }
    let scales: Vec<T> = columns
        .iter()
        .map(|col| {
            let s = if config.standardize {
                scalar::std_dev(col).unwrap_or_else(T::one)
            } else {
                T::one()
            };
            if s > T::zero() && s.is_finite() {
                s
            } else {
                T::one()
            }
        })
        .collect();
    let diffs = (0..candidates.len())
        .map(|i| {
            names
                .iter()
                .enumerate()
                .map(|(j, name)| {
                    let delta = (query.features[*name] - columns[j][i]) / scales[j];
                    delta * delta
                })
                .collect()
        })
        .collect();

    let mut game = Game {
        ids: candidates.iter().map(|i| i.id.as_str()).collect(),
        labels,
        diffs,
        d,
        k: config.k,
        mode: config.mode,
        target: None,
    };
    let full_mask = (1u64 << d) - 1;
    let full = game.predict(full_mask)?;
    game.target = match (config.mode, &config.target_class) {
        (PredictMode::Classify, Some(t)) => Some(t.clone()),
        (PredictMode::Classify, None) => Some(full.label()),
        (PredictMode::Regress, _) => None,
    };
    let prediction = full.value_for(game.target.as_ref());
    let base_value = game.base_value()?;

    let phi = if exact {
        exact_values(&game)?
    } else {
        sampled_values(&game, config.samples.unwrap_or(1).max(1), config.seed)?
    };
    Ok(AttributionResult {
        per_feature: names.into_iter().cloned().zip(phi).collect(),
        base_value,
        prediction,
        exact,
    })
}

fn exact_values<T: Scalar>(game: &Game<'_, T>) -> Result<Vec<T>> {
    let d = game.d;
    let values = (0..1u64 << d).map(|m| game.value(m)).collect::<Result<Vec<T>>>()?;
    // weight[s] = s! (d - s - 1)! / d!
    let factorial = |n: usize| (1..=n).fold(1.0_f64, |acc, i| acc * i as f64);
    let weights: Vec<T> = (0..d)
        .map(|s| T::of(factorial(s) * factorial(d - s - 1) / factorial(d)))
        .collect();
    let mut phi = vec![T::zero(); d];
    for (mask, &v) in values.iter().enumerate() {
        let size = (mask as u64).count_ones() as usize;
        for (i, slot) in phi.iter_mut().enumerate() {
            if mask & (1 << i) == 0 {
                let with = values[mask | (1 << i)];
                *slot = *slot + weights[size] * (with - v);
            }
        }
    }
    Ok(phi)
}

fn sampled_values<T: Scalar>(game: &Game<'_, T>, samples: usize, seed: u64) -> Result<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache: HashMap<u64, T> = HashMap::new();
    let mut value = |mask: u64| -> Result<T> {
        if let Some(v) = cache.get(&mask) {
            return Ok(*v);
        }
        let v = game.value(mask)?;
        cache.insert(mask, v);
        Ok(v)
    };
    let mut phi = vec![T::zero(); game.d];
    let mut order: Vec<usize> = (0..game.d).collect();
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let mut mask = 0u64;
        let mut prev = value(mask)?;
        for &j in &order {
            mask |= 1 << j;
            let next = value(mask)?;
            phi[j] = phi[j] + (next - prev);
            prev = next;
        }
    }
    let n = T::of_usize(samples);
    Ok(phi.into_iter().map(|p| p / n).collect())
}
