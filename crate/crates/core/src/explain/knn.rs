use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Label, Neighbor, Scored};
use crate::scalar::Scalar;
use crate::store::{Collection, Filter, Hit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredictMode {
    Classify,
    Regress,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum Prediction<T> {
    /// Majority label and per-class vote fractions.
    Class {
        label: Label<T>,
        votes: BTreeMap<String, T>,
    },
    Value(T),
}

impl<T: Scalar> Prediction<T> {
    /// Real-valued view: the regression value, or the vote fraction of
    /// `class` (the predicted class when `None`).
    pub fn value_for(&self, class: Option<&Label<T>>) -> T {
        match self {
            Prediction::Value(v) => *v,
            Prediction::Class { label, votes } => {
                let key = class.unwrap_or(label).class_key();
                votes.get(&key).copied().unwrap_or_else(T::zero)
            }
        }
    }

    pub fn label(&self) -> Label<T> {
        match self {
            Prediction::Value(v) => Label::Num(*v),
            Prediction::Class { label, .. } => label.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct KnnPrediction<T> {
    pub prediction: Prediction<T>,
    pub neighbors: Vec<Neighbor<T>>,
}

/// Aggregates neighbour labels, nearest first.
///
/// Classification ties go to the tied class that appears first in the list.
pub(crate) fn aggregate<'a, T: Scalar>(
    labels: impl IntoIterator<Item = (&'a str, &'a Label<T>)>,
    mode: PredictMode,
) -> Result<Prediction<T>> {
    let labels: Vec<(&str, &Label<T>)> = labels.into_iter().collect();
    if labels.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let n = T::of_usize(labels.len());
    match mode {
        PredictMode::Regress => {
            let mut sum = T::zero();
            for (id, label) in &labels {
                sum = sum + label.as_num().ok_or_else(|| Error::NonNumericLabel((*id).to_owned()))?;
            }
            Ok(Prediction::Value(sum / n))
        }
        PredictMode::Classify => {
            // key -> (count, first position, label)
            let mut tally: BTreeMap<String, (usize, usize, &Label<T>)> = BTreeMap::new();
            for (pos, (_, label)) in labels.iter().enumerate() {
                tally
                    .entry(label.class_key())
                    .and_modify(|e| e.0 += 1)
                    .or_insert((1, pos, label));
            }
            let (_, _, winner) = tally
                .values()
                .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)))
                .copied()
                .expect("non-empty tally");
            let votes = tally
                .iter()
                .map(|(k, (count, _, _))| (k.clone(), T::of_usize(*count) / n))
                .collect();
            Ok(Prediction::Class {
                label: winner.clone(),
                votes,
            })
        }
    }
}

fn neighbor_labels<'a, T: Scalar>(
    collection: &'a Collection<T>,
    hits: &'a [Hit<T>],
) -> Result<Vec<(&'a str, &'a Label<T>)>> {
    hits.iter()
        .map(|h| {
            let inst = collection.get(&h.id).expect("hit ids come from the collection");
            inst.require_label().map(|l| (h.id.as_str(), l))
        })
        .collect()
}

/// k-nearest-neighbour prediction in embedding space.
pub fn knn_predict<T: Scalar>(
    collection: &Collection<T>,
    query: &[T],
    k: usize,
    mode: PredictMode,
    filter: Option<&Filter<T>>,
) -> Result<KnnPrediction<T>> {
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let hits = collection.knn_query(query, k, filter)?;
    let labels = neighbor_labels(collection, &hits)?;
    let prediction = aggregate(labels.iter().copied(), mode)?;
    let neighbors = hits
        .iter()
        .zip(&labels)
        .map(|(h, (_, l))| Neighbor {
            id: h.id.clone(),
            distance: h.distance,
            label: Some((*l).clone()),
        })
        .collect();
    Ok(KnnPrediction {
        prediction,
        neighbors,
    })
}

/// Leave-one-out influence of each of the `k + 1` nearest neighbours.
///
/// `influence(i) = prediction without i − prediction with the full set`,
/// where classification predictions are read as the vote fraction of the
/// class predicted by the full neighbourhood. Sorted by descending
/// magnitude; equal magnitudes keep distance order.
pub fn influential_instances<T: Scalar>(
    collection: &Collection<T>,
    query: &[T],
    k: usize,
    mode: PredictMode,
    filter: Option<&Filter<T>>,
) -> Result<Vec<Scored<T>>> {
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let hits = collection.knn_query(query, k + 1, filter)?;
    if hits.len() < 2 {
        return Err(Error::InvalidArgument(
            "leave-one-out influence needs at least two candidate instances".into(),
        ));
    }
    let labels = neighbor_labels(collection, &hits)?;
    let full = aggregate(labels.iter().take(k).copied(), mode)?;
    let target = full.label();
    let full_value = full.value_for(Some(&target));

    let mut out = Vec::with_capacity(hits.len());
    for (removed, hit) in hits.iter().enumerate() {
        let rest = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != removed)
            .map(|(_, l)| *l)
            .take(k);
        let loo = aggregate(rest, mode)?;
        out.push(Scored::new(hit.id.clone(), loo.value_for(Some(&target)) - full_value));
    }
    out.sort_by(|a, b| {
        b.value
            .abs()
            .partial_cmp(&a.value.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}
