use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Target or model output: numeric (regression, or numerically coded classes)
/// or categorical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
pub enum Label<T> {
    Num(T),
    Class(String),
}

impl<T: Scalar> Label<T> {
    /// Canonical string used to group instances into classes.
    pub fn class_key(&self) -> String {
        self.to_string()
    }

    pub fn as_num(&self) -> Option<T> {
        match self {
            Label::Num(v) => Some(*v),
            Label::Class(_) => None,
        }
    }
}

impl<T: Scalar> fmt::Display for Label<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Num(v) => write!(f, "{v}"),
            Label::Class(s) => f.write_str(s),
        }
    }
}

impl<T: Scalar> From<T> for Label<T> {
    fn from(v: T) -> Self {
        Label::Num(v)
    }
}

impl<T> From<&str> for Label<T> {
    fn from(s: &str) -> Self {
        Label::Class(s.to_owned())
    }
}

pub type FeatureMap<T> = BTreeMap<String, T>;

pub(crate) fn epoch() -> DateTime<Utc> {
    DateTime::<Utc>::UNIX_EPOCH
}

/// One stored observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Instance<T> {
    pub id: String,
    pub embedding: Vec<T>,
    #[serde(default)]
    pub features: FeatureMap<T>,
    #[serde(default)]
    pub label: Option<Label<T>>,
    #[serde(default)]
    pub prediction: Option<Label<T>>,
    #[serde(default)]
    pub validated: bool,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    #[serde(default = "epoch")]
    pub timestamp: DateTime<Utc>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(id: impl Into<String>, embedding: Vec<T>) -> Self {
        Instance {
            id: id.into(),
            embedding,
            features: BTreeMap::new(),
            label: None,
            prediction: None,
            validated: false,
            metadata: BTreeMap::new(),
            timestamp: epoch(),
        }
    }

    pub fn with_label(mut self, label: impl Into<Label<T>>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_prediction(mut self, prediction: impl Into<Label<T>>) -> Self {
        self.prediction = Some(prediction.into());
        self
    }

    pub fn with_feature(mut self, name: impl Into<String>, value: T) -> Self {
        self.features.insert(name.into(), value);
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn validated(mut self, validated: bool) -> Self {
        self.validated = validated;
        self
    }

    pub fn require_label(&self) -> Result<&Label<T>> {
        self.label
            .as_ref()
            .ok_or_else(|| Error::MissingLabels(self.id.clone()))
    }

    pub fn require_feature(&self, name: &str) -> Result<T> {
        self.features
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingFeature {
                id: self.id.clone(),
                feature: name.to_owned(),
            })
    }
}

/// Checks the per-instance invariants against a collection dimension.
///
/// Id uniqueness is a collection-level property and is enforced at insertion.
pub fn validate_instance<T: Scalar>(candidate: Instance<T>, dimension: usize) -> Result<Instance<T>> {
    if candidate.embedding.len() != dimension {
        return Err(Error::DimensionMismatch {
            expected: dimension,
            found: candidate.embedding.len(),
        });
    }
    if candidate.embedding.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(format!("{}.embedding", candidate.id)));
    }
    if let Some((name, _)) = candidate.features.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue(format!("{}.features.{name}", candidate.id)));
    }
    for (field, label) in [("label", &candidate.label), ("prediction", &candidate.prediction)] {
        if let Some(Label::Num(v)) = label {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(format!("{}.{field}", candidate.id)));
            }
        }
    }
    Ok(candidate)
}

/// Reads the line-delimited JSON instance format. Blank lines are skipped.
pub fn read_instances_jsonl<T: Scalar, R: BufRead>(reader: R) -> Result<Vec<Instance<T>>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: Instance<T> = serde_json::from_str(&line).map_err(|e| {
            Error::InvalidArgument(format!("line {}: {e}", lineno + 1))
        })?;
        out.push(inst);
    }
    Ok(out)
}

pub fn write_instances_jsonl<'a, T: Scalar, W: std::io::Write>(
    mut writer: W,
    instances: impl IntoIterator<Item = &'a Instance<T>>,
) -> Result<()> {
    for inst in instances {
        serde_json::to_writer(&mut writer, inst)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
