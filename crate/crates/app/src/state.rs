use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use sha2::{Digest, Sha256};

use exemplar_core::credit::{generate_portfolio_with_threshold, CreditConfig, CreditHarness};
use exemplar_core::decision_log::DecisionLog;
use exemplar_core::model::{default_catalog, validate_catalog, MethodCatalogEntry, ModeWeightTable};
use exemplar_core::store::{load, persist, Collection, SharedCollection};
use exemplar_core::{DecisionLogF64, DecisionRecordF64};

use crate::config::{check_collection_name, ServerConfig};
use crate::error::{AppError, AppResult};

const COLLECTION_EXT: &str = "col";
const DECISIONS_FILE: &str = "decisions.log";
pub const CREDIT_COLLECTION: &str = "credit";

pub struct AppState {
    pub config: ServerConfig,
    /// SHA-256 of the serialized config, stamped into training reports.
    pub config_digest: String,
    pub catalog: Vec<MethodCatalogEntry>,
    pub table: ModeWeightTable,
    pub credit: Option<CreditHarness>,
    collections: RwLock<BTreeMap<String, Arc<SharedCollection<f64>>>>,
    decisions: Mutex<DecisionLogF64>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> AppResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::BadConfig(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| AppError::BadConfig(format!("{}: {e}", path.display())))
}

impl AppState {
    pub fn new(config: ServerConfig) -> AppResult<Self> {
        config.validate()?;
        let catalog = match &config.catalog {
            Some(p) => read_json(p)?,
            None => default_catalog(),
        };
        validate_catalog(&catalog).map_err(|e| AppError::BadConfig(e.to_string()))?;
        let table = match &config.weight_table {
            Some(p) => read_json(p)?,
            None => ModeWeightTable::default(),
        };
        let config_digest = hex::encode(Sha256::digest(
            serde_json::to_vec(&config).map_err(|e| AppError::BadConfig(e.to_string()))?,
        ));

        let mut collections = BTreeMap::new();
        let mut decisions = DecisionLog::new(config.decision_dimension)?;
        if let Some(dir) = &config.data_dir {
            std::fs::create_dir_all(dir)?;
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == COLLECTION_EXT))
                .collect();
            paths.sort();
            for p in paths {
                let c: Collection<f64> = load(&p)?;
                collections.insert(c.name().to_owned(), Arc::new(SharedCollection::new(c)));
            }
            let log_path = dir.join(DECISIONS_FILE);
            if log_path.exists() {
                decisions = DecisionLog::load(&log_path)?;
                if decisions.dimension() != config.decision_dimension {
                    return Err(AppError::BadConfig(format!(
                        "stored decision log has dimension {}, config says {}",
                        decisions.dimension(),
                        config.decision_dimension
                    )));
                }
            }
        }
        for spec in &config.collections {
            if let Some(existing) = collections.get(&spec.name) {
                let snap = existing.snapshot();
                if snap.dimension() != spec.dimension || snap.metric() != spec.metric {
                    return Err(AppError::BadConfig(format!(
                        "stored collection {:?} does not match its declaration",
                        spec.name
                    )));
                }
                continue;
            }
            let c = Collection::new(spec.name.clone(), spec.dimension, spec.metric)?;
            collections.insert(spec.name.clone(), Arc::new(SharedCollection::new(c)));
        }
        let credit = match &config.credit_demo {
            Some(demo) => {
                let portfolio = generate_portfolio_with_threshold(demo.n, demo.seed, demo.threshold)?;
                let harness = CreditHarness::new(portfolio, CreditConfig { seed: demo.seed, ..CreditConfig::default() })?;
                let mut c = harness.collection.clone();
                if c.name() != CREDIT_COLLECTION {
                    let mut renamed = Collection::new(CREDIT_COLLECTION, c.dimension(), c.metric())?;
                    renamed.upsert_all(c.iter().cloned())?;
                    c = renamed;
                }
                collections.insert(CREDIT_COLLECTION.to_owned(), Arc::new(SharedCollection::new(c)));
                Some(harness)
            }
            None => None,
        };
        Ok(AppState {
            config,
            config_digest,
            catalog,
            table,
            credit,
            collections: RwLock::new(collections),
            decisions: Mutex::new(decisions),
        })
    }

    fn collection_path(&self, name: &str) -> Option<PathBuf> {
        self.config
            .data_dir
            .as_ref()
            .map(|d| d.join(format!("{name}.{COLLECTION_EXT}")))
    }

    pub fn collection(&self, name: &str) -> AppResult<Arc<SharedCollection<f64>>> {
        self.collections
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(name)
            .cloned()
            .ok_or_else(|| AppError::UnknownCollection(name.to_owned()))
    }

    pub fn snapshot(&self, name: &str) -> AppResult<Arc<Collection<f64>>> {
        Ok(self.collection(name)?.snapshot())
    }

    pub fn create_collection(&self, collection: Collection<f64>) -> AppResult<()> {
        check_collection_name(collection.name())?;
        let mut map = self.collections.write().unwrap_or_else(|e| e.into_inner());
        if map.contains_key(collection.name()) {
            return Err(AppError::CollectionExists(collection.name().to_owned()));
        }
        if let Some(path) = self.collection_path(collection.name()) {
            persist(&collection, path)?;
        }
        map.insert(collection.name().to_owned(), Arc::new(SharedCollection::new(collection)));
        Ok(())
    }

    /// Upserts into one collection; the new version is persisted before it is
    /// published, and writers to the same collection are serialized.
    pub fn upsert(&self, name: &str, instances: Vec<exemplar_core::InstanceF64>) -> AppResult<usize> {
        let shared = self.collection(name)?;
        let path = self.collection_path(name);
        Ok(shared.update(|c| {
            let n = c.upsert_all(instances)?;
            if let Some(p) = &path {
                persist(c, p)?;
            }
            Ok(n)
        })?)
    }

    pub fn decisions(&self) -> Vec<DecisionRecordF64> {
        self.decisions.lock().unwrap_or_else(|e| e.into_inner()).iter().cloned().collect()
    }

    /// Clones the log so a failed persist leaves the served log untouched.
    pub fn record_decision(&self, record: DecisionRecordF64) -> AppResult<DecisionRecordF64> {
        let mut guard = self.decisions.lock().unwrap_or_else(|e| e.into_inner());
        let mut next = guard.clone();
        let id = record.id.clone();
        next.record_decision(record)?;
        if let Some(dir) = &self.config.data_dir {
            next.persist(dir.join(DECISIONS_FILE))?;
        }
        *guard = next;
        Ok(guard.get(&id).cloned().expect("record was just stored"))
    }

    pub fn with_decisions<R>(&self, f: impl FnOnce(&DecisionLogF64) -> R) -> R {
        f(&self.decisions.lock().unwrap_or_else(|e| e.into_inner()))
    }
}
