use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::instance::{epoch, Label};
use super::taxonomy::{BehaviorCategory, ExplanationMode, ExplanationType};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A method name with the reason it was set aside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodNote {
    pub method_name: String,
    pub rationale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub behavior_category: BehaviorCategory,
    pub rows: Vec<ExplanationType>,
    pub mode_scores: BTreeMap<ExplanationMode, f64>,
    /// Modes by descending score, ties in column order.
    pub ranked_modes: Vec<ExplanationMode>,
    pub ranked_methods: Vec<String>,
    pub excluded: Vec<MethodNote>,
    pub deferred: Vec<MethodNote>,
}

impl Recommendation {
    pub fn is_excluded(&self, method: &str) -> bool {
        self.excluded.iter().any(|n| n.method_name == method)
    }

    pub fn is_deferred(&self, method: &str) -> bool {
        self.deferred.iter().any(|n| n.method_name == method)
    }
}

/// An instance id paired with a distance, score or influence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scored<T> {
    pub id: String,
    pub value: T,
}

impl<T> Scored<T> {
    pub fn new(id: impl Into<String>, value: T) -> Self {
        Scored {
            id: id.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Neighbor<T> {
    pub id: String,
    pub distance: T,
    pub label: Option<Label<T>>,
}

/// Composite explanation for one query instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ExplanationBundle<T> {
    pub query_id: String,
    #[serde(default)]
    pub neighbors: Vec<Neighbor<T>>,
    /// Prototype ids with their distance to the query.
    #[serde(default)]
    pub prototypes: Vec<Scored<T>>,
    /// Criticism ids with their witness value.
    #[serde(default)]
    pub criticisms: Vec<Scored<T>>,
    #[serde(default)]
    pub counterfactual: Option<Scored<T>>,
    #[serde(default)]
    pub influences: Vec<Scored<T>>,
    #[serde(default)]
    pub attributions: BTreeMap<String, T>,
    #[serde(default)]
    pub base_value: Option<T>,
    #[serde(default)]
    pub predicted_value: Option<T>,
    #[serde(default)]
    pub rendered_text: String,
}

impl<T: Scalar> ExplanationBundle<T> {
    pub fn new(query_id: impl Into<String>) -> Self {
        ExplanationBundle {
            query_id: query_id.into(),
            neighbors: Vec::new(),
            prototypes: Vec::new(),
            criticisms: Vec::new(),
            counterfactual: None,
            influences: Vec::new(),
            attributions: BTreeMap::new(),
            base_value: None,
            predicted_value: None,
            rendered_text: String::new(),
        }
    }

    /// Every instance id the bundle refers to.
    pub fn referenced_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.neighbors.iter().map(|n| n.id.as_str()).collect();
        ids.extend(self.prototypes.iter().map(|s| s.id.as_str()));
        ids.extend(self.criticisms.iter().map(|s| s.id.as_str()));
        ids.extend(self.counterfactual.iter().map(|s| s.id.as_str()));
        ids.extend(self.influences.iter().map(|s| s.id.as_str()));
        ids
    }
}

/// A logged human decision or validated answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DecisionRecord<T> {
    pub id: String,
    pub query_embedding: Vec<T>,
    pub decision: String,
    #[serde(default)]
    pub justification: String,
    #[serde(default)]
    pub validator: String,
    #[serde(default)]
    pub validated: bool,
    #[serde(default = "epoch")]
    pub timestamp: DateTime<Utc>,
}

impl<T: Scalar> DecisionRecord<T> {
    pub fn validate(&self) -> Result<()> {
        if self.validated && self.validator.trim().is_empty() {
            return Err(Error::MissingValidator(self.id.clone()));
        }
        if self.query_embedding.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(format!("{}.query_embedding", self.id)));
        }
        Ok(())
    }
}
