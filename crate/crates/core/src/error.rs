use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFiniteValue(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("zero vector {0:?} cannot be stored or queried under the cosine metric")]
    ZeroVectorUnderCosine(String),
    #[error("collection is empty")]
    EmptyCollection,
    #[error("instance {0:?} has no label")]
    MissingLabels(String),
    #[error("label of {0:?} is not numeric")]
    NonNumericLabel(String),
    #[error("instance {id:?} lacks feature {feature:?}")]
    MissingFeature { id: String, feature: String },
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{features} features exceed the exact enumeration limit of {max}")]
    TooManyFeaturesForExact { features: usize, max: usize },
    #[error("class {class:?} has {size} members, {requested} requested")]
    ClassTooSmall {
        class: String,
        size: usize,
        requested: usize,
    },
    #[error("class {class:?}: {requested} criticisms requested, {remaining} candidates remain")]
    CountExceedsRemaining {
        class: String,
        requested: usize,
        remaining: usize,
    },
    #[error("cluster count must be at least two")]
    KBelowTwo,
    #[error("{points} points cannot form {k} clusters")]
    FewerPointsThanK { points: usize, k: usize },
    #[error("collection holds a single class; no unlike neighbour exists")]
    SingleClassCollection,
    #[error("no prototypes supplied")]
    NoPrototypes,
    #[error("unknown id {0:?}")]
    UnknownId(String),
    #[error("bundle field {0} is required by this template")]
    MissingBundleField(&'static str),
    #[error("behavior category {0} has no explanation rows")]
    UnsupportedCategory(String),
    #[error("unknown explanation row {0}")]
    UnknownRow(String),
    #[error("validated record {0:?} has no validator")]
    MissingValidator(String),
    #[error("similarity threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),
    #[error("applicant {0:?} was approved; only rejections are explained")]
    ApplicantApproved(String),
    #[error("edit of {feature:?} to {value} is outside [{min}, {max}]")]
    OutOfRangeEdit {
        feature: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("quadrant {quadrant} has {size} applicants, at least {min} required")]
    EmptyQuadrant {
        quadrant: String,
        size: usize,
        min: usize,
    },
    #[error("text has no tokens")]
    EmptyText,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corrupt file: {0}")]
    CorruptFile(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
