//! Example-based explainers. Every function is a pure computation over a
//! collection snapshot; randomness is always an explicit seed.

mod boundary;
mod cluster;
mod importance;
mod knn;
mod prototypes;
mod render;
mod report;
mod shapley;

pub use boundary::{
    adversarial_sensitivity, counterfactual_search, CounterfactualTarget, SensitivityEntry,
    SensitivityReport,
};
pub use cluster::{
    cluster_covariation, is_error, kmeans, ClusterReport, KMeans, CONVERGENCE_TOLERANCE,
    MAX_ITERATIONS,
};
pub use importance::{
    pdp_curve, permutation_importance, Importance, ImportanceMetric, Model, PdpPoint,
};
pub use knn::{influential_instances, knn_predict, KnnPrediction, PredictMode, Prediction};
pub use prototypes::{
    median_pairwise_distance, prototype_surrogate, rbf, select_criticisms, select_prototypes,
    witness_values, Bandwidth, ClassPrototypes, Criticism, KernelConfig, KernelKind,
    PrototypeSet, PrototypeSurrogate, SurrogateReport,
};
pub use render::render_text;
pub use report::{training_report, TrainingReport};
pub use shapley::{knn_shapley, AttributionResult, ShapleyConfig, DEFAULT_MAX_EXACT_DIM};
