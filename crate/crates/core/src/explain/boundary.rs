//! Retrieval around the decision boundary: nearest unlike neighbours as
//! counterfactuals, and like/unlike distance ratios as a perturbation
//! sensitivity signal.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Label, Scored};
use crate::scalar::Scalar;
use crate::store::Collection;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum CounterfactualTarget<T> {
    Label(Label<T>),
    /// Any label other than the query's own (its label, else its prediction).
    NotCurrent,
}

/// Nearest stored instance carrying the target label whose immutable features
/// equal the query's. The query's own id is never returned.
pub fn counterfactual_search<T: Scalar>(
    collection: &Collection<T>,
    query: &Instance<T>,
    target: &CounterfactualTarget<T>,
    immutable_features: &BTreeSet<String>,
) -> Result<Option<Scored<T>>> {
    collection.check_query(&query.embedding)?;
    let fixed: Vec<(&str, T)> = immutable_features
        .iter()
        .map(|name| query.require_feature(name).map(|v| (name.as_str(), v)))
        .collect::<Result<_>>()?;
    let current = match target {
        CounterfactualTarget::Label(_) => None,
        CounterfactualTarget::NotCurrent => Some(
            query
                .label
                .as_ref()
                .or(query.prediction.as_ref())
                .ok_or_else(|| Error::MissingLabels(query.id.clone()))?
                .class_key(),
        ),
    };
    let mut best: Option<Scored<T>> = None;
    for inst in collection.iter() {
        if inst.id == query.id {
            continue;
        }
        let Some(label) = &inst.label else { continue };
        let qualifies = match target {
            CounterfactualTarget::Label(want) => label == want,
            CounterfactualTarget::NotCurrent => Some(label.class_key()) != current,
        };
        if !qualifies {
            continue;
        }
        if !fixed.iter().all(|(name, v)| inst.features.get(*name) == Some(v)) {
            continue;
        }
        let d = collection.distance(&query.embedding, &inst.embedding);
        // Instances iterate in ascending id order, so strict < keeps the lowest id on ties.
        if best.as_ref().is_none_or(|b| d < b.value) {
            best = Some(Scored::new(inst.id.clone(), d));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SensitivityEntry<T> {
    pub id: String,
    pub unlike_distance: T,
    /// `None` when the instance is the only member of its class.
    pub like_distance: Option<T>,
    /// `unlike / like`; `None` when unbounded (no like neighbour, or a like
    /// duplicate at distance zero with the unlike neighbour further away).
    pub ratio: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SensitivityReport<T> {
    /// Every labelled instance, in id order.
    pub entries: Vec<SensitivityEntry<T>>,
    /// Entries with `ratio < threshold`, most sensitive first, at most `k`.
    pub flagged: Vec<Scored<T>>,
}

pub(crate) fn ratio<T: Scalar>(unlike: T, like: Option<T>) -> Option<T> {
    let like = like?;
    if like > T::zero() {
        Some(unlike / like)
    } else if unlike == T::zero() {
        Some(T::one())
    } else {
        None
    }
}

/// Ratio of the distance to the nearest unlike-labelled instance over the
/// distance to the nearest like-labelled one; ratios below `threshold` are
/// flagged as boundary-sensitive.
pub fn adversarial_sensitivity<T: Scalar>(
    collection: &Collection<T>,
    k: usize,
    threshold: T,
) -> Result<SensitivityReport<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let labelled: Vec<(&Instance<T>, String)> = collection
        .iter()
        .filter_map(|i| i.label.as_ref().map(|l| (i, l.class_key())))
        .collect();
    let classes: BTreeSet<&str> = labelled.iter().map(|(_, c)| c.as_str()).collect();
    if classes.len() < 2 {
        return Err(Error::SingleClassCollection);
    }
    let mut entries = Vec::with_capacity(labelled.len());
    for (inst, class) in &labelled {
        let mut like: Option<T> = None;
        let mut unlike: Option<T> = None;
        for (other, other_class) in &labelled {
            if other.id == inst.id {
                continue;
            }
            let d = collection.distance(&inst.embedding, &other.embedding);
            let slot = if other_class == class { &mut like } else { &mut unlike };
            if slot.is_none_or(|s| d < s) {
                *slot = Some(d);
            }
        }
        let unlike = unlike.expect("at least two classes exist");
        entries.push(SensitivityEntry {
            id: inst.id.clone(),
            unlike_distance: unlike,
            like_distance: like,
            ratio: ratio(unlike, like),
        });
    }
    let mut flagged: Vec<Scored<T>> = entries
        .iter()
        .filter_map(|e| e.ratio.filter(|r| *r < threshold).map(|r| Scored::new(e.id.clone(), r)))
        .collect();
    flagged.sort_by(|a, b| {
        a.value
            .partial_cmp(&b.value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.id.cmp(&b.id))
    });
    flagged.truncate(k);
    Ok(SensitivityReport { entries, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::fixtures::t4;
    use crate::store::Metric;

    #[test]
    fn counterfactuals_on_t4() {
        let c = t4();
        let a = c.get("A").unwrap().clone();
        let none = BTreeSet::new();
        let cf = counterfactual_search(&c, &a, &CounterfactualTarget::Label(Label::Num(1.0)), &none)
            .unwrap()
            .unwrap();
        assert_eq!((cf.id.as_str(), cf.value), ("C", 10.0));
        let cf = counterfactual_search(&c, &a, &CounterfactualTarget::Label(Label::Num(0.0)), &none)
            .unwrap()
            .unwrap();
        assert_eq!((cf.id.as_str(), cf.value), ("B", 1.0));
        let cf = counterfactual_search(&c, &a, &CounterfactualTarget::NotCurrent, &none)
            .unwrap()
            .unwrap();
        assert_eq!(cf.id, "C");
    }

    #[test]
    fn immutable_features_restrict_candidates() {
        let c = t4();
        let a = c.get("A").unwrap().clone();
        let fixed: BTreeSet<String> = ["y".to_string()].into();
        let cf = counterfactual_search(&c, &a, &CounterfactualTarget::NotCurrent, &fixed).unwrap().unwrap();
        assert_eq!(cf.id, "C");
        let fixed: BTreeSet<String> = ["x".to_string()].into();
        assert_eq!(
            counterfactual_search(&c, &a, &CounterfactualTarget::NotCurrent, &fixed).unwrap(),
            None
        );
    }

    #[test]
    fn t4_sensitivity() {
        let r = adversarial_sensitivity(&t4(), 4, 1.5).unwrap();
        let a = &r.entries[0];
        assert_eq!(a.id, "A");
        assert_eq!(a.unlike_distance, 10.0);
        assert_eq!(a.like_distance, Some(1.0));
        assert_eq!(a.ratio, Some(10.0));
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn equidistant_point_has_unit_ratio() {
        let mut c = Collection::new("e", 1, Metric::Euclidean).unwrap();
        c.upsert(Instance::new("l", vec![-1.0_f64]).with_label(0.0)).unwrap();
        c.upsert(Instance::new("m", vec![0.0]).with_label(0.0)).unwrap();
        c.upsert(Instance::new("r", vec![1.0]).with_label(1.0)).unwrap();
        let r = adversarial_sensitivity(&c, 5, 1.5).unwrap();
        let m = r.entries.iter().find(|e| e.id == "m").unwrap();
        assert_eq!(m.ratio, Some(1.0));
        assert_eq!(r.flagged[0].id, "m");
    }

    #[test]
    fn single_class_is_an_error() {
        let mut c = Collection::new("s", 1, Metric::Euclidean).unwrap();
        c.upsert(Instance::new("a", vec![0.0_f64]).with_label(0.0)).unwrap();
        c.upsert(Instance::new("b", vec![1.0]).with_label(0.0)).unwrap();
        assert!(matches!(adversarial_sensitivity(&c, 1, 1.0), Err(Error::SingleClassCollection)));
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(ratio(2.0_f64, Some(0.0)), None);
        assert_eq!(ratio(0.0_f64, Some(0.0)), Some(1.0));
        assert_eq!(ratio(2.0_f64, None), None);
    }
}
