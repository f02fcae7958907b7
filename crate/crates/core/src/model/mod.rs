//! Domain types shared across the crate.

mod instance;
mod profile;
mod records;
mod taxonomy;

#[cfg(test)]
pub(crate) use instance::epoch;
pub use instance::{
    read_instances_jsonl, validate_instance, write_instances_jsonl, FeatureMap, Instance, Label,
};
pub use profile::{Expertise, ModelProfile, Perspective, ProfilePair, TaskKind, UserProfile};
pub use records::{DecisionRecord, ExplanationBundle, MethodNote, Neighbor, Recommendation, Scored};
pub use taxonomy::{
    default_catalog, methods, validate_catalog, BehaviorCategory, ExplanationMode,
    ExplanationType, Mark, MethodCatalogEntry, ModeWeightTable, Tier, DEFAULT_MARKS,
};
