//! Dispatch of explanation methods by slug, shared by the service and the CLI.

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::Value;

use exemplar_core::explain::{
    adversarial_sensitivity, cluster_covariation, counterfactual_search, influential_instances, knn_predict,
    knn_shapley, prototype_surrogate, select_criticisms, select_prototypes, training_report,
    CounterfactualTarget, KernelConfig, PredictMode, ShapleyConfig,
};
use exemplar_core::store::{Collection, Filter};
use exemplar_core::{InstanceF64, LabelF64};

use crate::error::{AppError, AppResult};

pub const METHODS: [&str; 10] = [
    "knn",
    "influential",
    "shapley",
    "prototypes",
    "criticisms",
    "surrogate",
    "counterfactual",
    "adversarial",
    "clusters",
    "training-report",
];

/// Body of an explanation request. The query is either given inline or
/// named by the id of a stored instance.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainRequest {
    /// Target collection; required by the service, ignored by the CLI.
    pub collection: Option<String>,
    pub query: Option<InstanceF64>,
    pub query_id: Option<String>,
    pub params: ExplainParams,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainParams {
    pub k: usize,
    pub mode: PredictMode,
    pub filter: Option<Filter<f64>>,
    pub per_class: usize,
    pub count: usize,
    pub kernel: KernelConfig,
    /// Counterfactual target label; absent means any other class.
    pub target: Option<LabelF64>,
    pub immutable: BTreeSet<String>,
    pub threshold: f64,
    pub clusters: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub samples: Option<usize>,
    pub standardize: bool,
    pub target_class: Option<LabelF64>,
}

impl Default for ExplainParams {
    fn default() -> Self {
        ExplainParams {
            k: 5,
            mode: PredictMode::Classify,
            filter: None,
            per_class: 3,
            count: 2,
            kernel: KernelConfig::default(),
            target: None,
            immutable: BTreeSet::new(),
            threshold: 1.0,
            clusters: 4,
            seed: 0,
            tolerance: 0.0,
            samples: None,
            standardize: false,
            target_class: None,
        }
    }
}

fn resolve_query(collection: &Collection<f64>, req: &ExplainRequest) -> AppResult<InstanceF64> {
    match (&req.query, &req.query_id) {
        (Some(q), None) => Ok(q.clone()),
        (None, Some(id)) => collection
            .get(id)
            .cloned()
            .ok_or_else(|| exemplar_core::Error::UnknownId(id.clone()).into()),
        _ => Err(AppError::BadRequest("give exactly one of query and query_id".into())),
    }
}

fn to_json<S: serde::Serialize>(value: S) -> AppResult<Value> {
    serde_json::to_value(value).map_err(|e| AppError::Core(e.into()))
}

/// Runs `method` against `collection` and returns its output serialized as is.
pub fn explain(collection: &Collection<f64>, method: &str, req: &ExplainRequest) -> AppResult<Value> {
    let p = &req.params;
    match method {
        "knn" => {
            let q = resolve_query(collection, req)?;
            to_json(knn_predict(collection, &q.embedding, p.k, p.mode, p.filter.as_ref())?)
        }
        "influential" => {
            let q = resolve_query(collection, req)?;
            to_json(influential_instances(collection, &q.embedding, p.k, p.mode, p.filter.as_ref())?)
        }
        "shapley" => {
            let q = resolve_query(collection, req)?;
            let config = ShapleyConfig {
                samples: p.samples,
                seed: p.seed,
                standardize: p.standardize,
                target_class: p.target_class.clone(),
                ..ShapleyConfig::new(p.k, p.mode)
            };
            to_json(knn_shapley(collection, &q, &config)?)
        }
        "prototypes" => to_json(select_prototypes(collection, p.per_class, &p.kernel)?),
        "criticisms" => {
            let protos = select_prototypes(collection, p.per_class, &p.kernel)?;
            to_json(select_criticisms(collection, &protos, p.count)?)
        }
        "surrogate" => {
            let protos = select_prototypes(collection, p.per_class, &p.kernel)?;
            to_json(prototype_surrogate(collection, &protos.all_ids())?)
        }
        "counterfactual" => {
            let q = resolve_query(collection, req)?;
            let target = match &p.target {
                Some(l) => CounterfactualTarget::Label(l.clone()),
                None => CounterfactualTarget::NotCurrent,
            };
            to_json(counterfactual_search(collection, &q, &target, &p.immutable)?)
        }
        "adversarial" => to_json(adversarial_sensitivity(collection, p.k, p.threshold)?),
        "clusters" => to_json(cluster_covariation(collection, p.clusters, p.seed, p.tolerance)?),
        "training-report" => to_json(training_report(collection, "")),
        other => Err(AppError::UnknownMethod(other.to_owned())),
    }
}
