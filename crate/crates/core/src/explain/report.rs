use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cluster::is_error;
use crate::scalar::Scalar;
use crate::store::{Collection, Metric};

/// Summary of the data a model was fitted and validated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TrainingReport<T> {
    pub collection: String,
    pub instance_count: usize,
    pub labeled_count: usize,
    pub dimension: usize,
    pub metric: Metric,
    /// Share of labelled instances per class.
    pub class_balance: BTreeMap<String, T>,
    pub validated_fraction: Option<T>,
    /// Exact-mismatch rate over instances carrying both label and prediction.
    pub global_error_rate: Option<T>,
    pub config_digest: String,
}

pub fn training_report<T: Scalar>(collection: &Collection<T>, config_digest: &str) -> TrainingReport<T> {
    let n = collection.len();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut validated = 0usize;
    let mut judged = 0usize;
    let mut wrong = 0usize;
    for inst in collection.iter() {
        if let Some(label) = &inst.label {
            *counts.entry(label.class_key()).or_default() += 1;
        }
        validated += usize::from(inst.validated);
        if inst.label.is_some() && inst.prediction.is_some() {
            judged += 1;
            wrong += usize::from(is_error(inst, T::zero()).unwrap_or(false));
        }
    }
    let labeled: usize = counts.values().sum();
    let ratio = |num: usize, den: usize| (den > 0).then(|| T::of_usize(num) / T::of_usize(den));
    TrainingReport {
        collection: collection.name().to_owned(),
        instance_count: n,
        labeled_count: labeled,
        dimension: collection.dimension(),
        metric: collection.metric(),
        class_balance: counts
            .into_iter()
            .map(|(k, c)| (k, T::of_usize(c) / T::of_usize(labeled)))
            .collect(),
        validated_fraction: ratio(validated, n),
        global_error_rate: ratio(wrong, judged),
        config_digest: config_digest.to_owned(),
    }
}
