use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use exemplar_core::credit::DEFAULT_THRESHOLD_RATING;
use exemplar_core::store::Metric;

use crate::error::{AppError, AppResult};

pub const DEFAULT_PORT: u16 = 8080;
/// Embedding width of the credit applicants, so overrides logged from the
/// console can be recalled for later cases.
pub const DEFAULT_DECISION_DIMENSION: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectionSpec {
    pub name: String,
    pub dimension: usize,
    pub metric: Metric,
}

/// Seeded credit portfolio served as the `credit` collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CreditDemoSpec {
    pub n: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for CreditDemoSpec {
    fn default() -> Self {
        CreditDemoSpec {
            n: 500,
            seed: 0,
            threshold: DEFAULT_THRESHOLD_RATING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    pub port: u16,
    /// Collections and the decision log are persisted here when set.
    pub data_dir: Option<PathBuf>,
    pub collections: Vec<CollectionSpec>,
    /// JSON method catalog replacing the built-in one.
    pub catalog: Option<PathBuf>,
    /// JSON weight table replacing the built-in one.
    pub weight_table: Option<PathBuf>,
    pub decision_dimension: usize,
    pub credit_demo: Option<CreditDemoSpec>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            port: DEFAULT_PORT,
            data_dir: None,
            collections: Vec::new(),
            catalog: None,
            weight_table: None,
            decision_dimension: DEFAULT_DECISION_DIMENSION,
            credit_demo: None,
        }
    }
}

/// Collection names become file names, so they are kept to a safe alphabet.
pub fn check_collection_name(name: &str) -> AppResult<()> {
    let ok = !name.is_empty()
        && name.len() <= 64
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(AppError::BadRequest(format!(
            "collection name {name:?} must be 1-64 characters of [A-Za-z0-9_-]"
        )))
    }
}

impl ServerConfig {
    pub fn from_file(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::BadConfig(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| AppError::BadConfig(format!("{}: {e}", path.display())))
    }

    /// Applies `EXPL_PORT` and `EXPL_DATA_DIR` as read through `var`.
    pub fn with_env(mut self, var: impl Fn(&str) -> Option<String>) -> AppResult<Self> {
        if let Some(port) = var("EXPL_PORT") {
            self.port = port
                .trim()
                .parse()
                .map_err(|_| AppError::BadConfig(format!("EXPL_PORT={port:?} is not a port number")))?;
        }
        if let Some(dir) = var("EXPL_DATA_DIR") {
            self.data_dir = Some(PathBuf::from(dir));
        }
        Ok(self)
    }

    pub fn validate(&self) -> AppResult<()> {
        if self.decision_dimension == 0 {
            return Err(AppError::BadConfig("decision_dimension must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &self.collections {
            check_collection_name(&c.name).map_err(|e| AppError::BadConfig(e.to_string()))?;
            if c.dimension == 0 {
                return Err(AppError::BadConfig(format!("collection {:?} has dimension 0", c.name)));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(AppError::BadConfig(format!("collection {:?} declared twice", c.name)));
            }
        }
        if let Some(demo) = &self.credit_demo {
            if seen.contains("credit") {
                return Err(AppError::BadConfig("collection name \"credit\" is reserved by credit_demo".into()));
            }
            if !(0.0..=1.0).contains(&demo.threshold) {
                return Err(AppError::BadConfig(format!("credit threshold {} outside [0, 1]", demo.threshold)));
            }
        }
        Ok(())
    }
}
