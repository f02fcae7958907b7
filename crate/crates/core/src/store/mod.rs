//! Exact nearest-neighbour search over labelled instances.

pub(crate) mod persist;
mod shared;

pub use persist::{load, persist, CollectionHeader};
pub use shared::SharedCollection;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_instance, Instance, Label};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    /// `1 - cos(x, y)`.
    Cosine,
}

impl Metric {
    pub fn distance<T: Scalar>(self, a: &[T], b: &[T]) -> T {
        match self {
            Metric::Euclidean => scalar::euclidean(a, b),
            Metric::Cosine => match scalar::cosine_similarity(a, b) {
                Some(s) => T::one() - s,
                None => T::one(),
            },
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
        })
    }
}

/// Restricts which stored instances a query may return.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Filter<T> {
    #[serde(default)]
    pub label_equals: Option<Label<T>>,
    /// Matches labelled instances whose label differs.
    #[serde(default)]
    pub label_not_equals: Option<Label<T>>,
    #[serde(default)]
    pub metadata_equals: Vec<(String, String)>,
    #[serde(default)]
    pub validated_only: bool,
    #[serde(default)]
    pub exclude_id: Option<String>,
}

impl<T> Default for Filter<T> {
    fn default() -> Self {
        Filter {
            label_equals: None,
            label_not_equals: None,
            metadata_equals: Vec::new(),
            validated_only: false,
            exclude_id: None,
        }
    }
}

impl<T: Scalar> Filter<T> {
    pub fn label(label: impl Into<Label<T>>) -> Self {
        Filter {
            label_equals: Some(label.into()),
            ..Filter::default()
        }
    }

    pub fn not_label(label: impl Into<Label<T>>) -> Self {
        Filter {
            label_not_equals: Some(label.into()),
            ..Filter::default()
        }
    }

    pub fn excluding(mut self, id: impl Into<String>) -> Self {
        self.exclude_id = Some(id.into());
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata_equals.push((key.into(), value.into()));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.label_equals.is_some() && self.label_not_equals.is_some() {
            return Err(Error::InvalidFilter(
                "label_equals and label_not_equals are mutually exclusive".into(),
            ));
        }
        Ok(())
    }

    pub fn matches(&self, inst: &Instance<T>) -> bool {
        if self.exclude_id.as_deref() == Some(inst.id.as_str()) {
            return false;
        }
        if self.validated_only && !inst.validated {
            return false;
        }
        if let Some(want) = &self.label_equals {
            if inst.label.as_ref() != Some(want) {
                return false;
            }
        }
        if let Some(avoid) = &self.label_not_equals {
            match &inst.label {
                Some(l) if l != avoid => {}
                _ => return false,
            }
        }
        self.metadata_equals
            .iter()
            .all(|(k, v)| inst.metadata.get(k) == Some(v))
    }
}

/// A search result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Hit<T> {
    pub id: String,
    pub distance: T,
}

/// Total order on hits: non-decreasing distance, then ascending id.
pub fn hit_order<T: Scalar>(a: &Hit<T>, b: &Hit<T>) -> std::cmp::Ordering {
    a.distance
        .partial_cmp(&b.distance)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then_with(|| a.id.cmp(&b.id))
}

/// Named set of instances sharing one embedding dimension and metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Collection<T> {
    name: String,
    dimension: usize,
    metric: Metric,
    instances: BTreeMap<String, Instance<T>>,
}

impl<T: Scalar> Collection<T> {
    pub fn new(name: impl Into<String>, dimension: usize, metric: Metric) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Collection {
            name: name.into(),
            dimension,
            metric,
            instances: BTreeMap::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Instance<T>> {
        self.instances.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.instances.contains_key(id)
    }

    /// Instances in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = &Instance<T>> {
        self.instances.values()
    }

    /// Inserts or replaces by id; returns the stored count.
    pub fn upsert(&mut self, instance: Instance<T>) -> Result<usize> {
        let instance = validate_instance(instance, self.dimension)?;
        if self.metric == Metric::Cosine && instance.embedding.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroVectorUnderCosine(instance.id));
        }
        self.instances.insert(instance.id.clone(), instance);
        Ok(self.instances.len())
    }

    pub fn upsert_all(&mut self, instances: impl IntoIterator<Item = Instance<T>>) -> Result<usize> {
        for inst in instances {
            self.upsert(inst)?;
        }
        Ok(self.len())
    }

    pub fn remove(&mut self, id: &str) -> Option<Instance<T>> {
        self.instances.remove(id)
    }

    pub fn distance(&self, a: &[T], b: &[T]) -> T {
        self.metric.distance(a, b)
    }

    pub fn check_query(&self, query: &[T]) -> Result<()> {
        if query.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: query.len(),
            });
        }
        if query.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue("query".into()));
        }
        if self.metric == Metric::Cosine && query.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroVectorUnderCosine("query".into()));
        }
        Ok(())
    }

    /// Every matching instance with its distance, in hit order.
    pub fn scan(&self, query: &[T], filter: Option<&Filter<T>>) -> Result<Vec<Hit<T>>> {
        self.check_query(query)?;
        if let Some(f) = filter {
            f.validate()?;
        }
        let mut hits: Vec<Hit<T>> = self
            .instances
            .values()
            .filter(|inst| filter.is_none_or(|f| f.matches(inst)))
            .map(|inst| Hit {
                id: inst.id.clone(),
                distance: self.distance(query, &inst.embedding),
            })
            .collect();
        hits.sort_by(hit_order);
        Ok(hits)
    }

    /// The `k` nearest matching instances. An empty collection yields no hits.
    pub fn knn_query(&self, query: &[T], k: usize, filter: Option<&Filter<T>>) -> Result<Vec<Hit<T>>> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let mut hits = self.scan(query, filter)?;
        hits.truncate(k);
        Ok(hits)
    }

    /// All matching instances within `radius` (inclusive).
    pub fn range_query(&self, query: &[T], radius: T, filter: Option<&Filter<T>>) -> Result<Vec<Hit<T>>> {
        if radius.is_nan() || radius < T::zero() {
            return Err(Error::InvalidArgument("radius must be non-negative".into()));
        }
        let mut hits = self.scan(query, filter)?;
        hits.retain(|h| h.distance <= radius);
        Ok(hits)
    }
}
