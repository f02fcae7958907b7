//! Example-based explanation engine.
//!
//! A vector store of labelled instances, a set of example-based explainers
//! that run over store snapshots, and a rule engine that maps a model/user
//! profile onto recommended and excluded explanation methods.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod decision_log;
pub mod credit;
pub mod docs;
pub mod engine;
pub mod error;
pub mod explain;
pub mod model;
pub mod scalar;
pub mod store;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type InstanceF64 = model::Instance<f64>;
pub type LabelF64 = model::Label<f64>;
pub type CollectionF64 = store::Collection<f64>;
pub type FilterF64 = store::Filter<f64>;
pub type HitF64 = store::Hit<f64>;
pub type ExplanationBundleF64 = model::ExplanationBundle<f64>;
pub type DecisionRecordF64 = model::DecisionRecord<f64>;
pub type DecisionLogF64 = decision_log::DecisionLog<f64>;
pub type ShapleyConfigF64 = explain::ShapleyConfig<f64>;
pub type AttributionF64 = explain::AttributionResult<f64>;
