use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use exemplar_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("collection {0:?} not found")]
    UnknownCollection(String),
    #[error("collection {0:?} already exists")]
    CollectionExists(String),
    #[error("unknown explanation method {0:?}")]
    UnknownMethod(String),
    #[error("no route for {0}")]
    NoRoute(String),
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error("plot rendering failed: {0}")]
    Plot(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type AppResult<T> = std::result::Result<T, AppError>;

/// Body of every error response.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
    pub detail: serde_json::Value,
}

fn core_code(e: &CoreError) -> &'static str {
    use CoreError::*;
    match e {
        DimensionMismatch { .. } => "DimensionMismatch",
        NonFiniteValue(_) => "NonFiniteValue",
        DuplicateId(_) => "DuplicateId",
        ZeroVectorUnderCosine(_) => "ZeroVectorUnderCosine",
        EmptyCollection => "EmptyCollection",
        MissingLabels(_) => "MissingLabels",
        NonNumericLabel(_) => "NonNumericLabel",
        MissingFeature { .. } => "MissingFeature",
        UnknownFeature(_) => "UnknownFeature",
        InvalidProfile(_) => "InvalidProfile",
        InvalidFilter(_) => "InvalidFilter",
        InvalidArgument(_) => "InvalidArgument",
        TooManyFeaturesForExact { .. } => "TooManyFeaturesForExact",
        ClassTooSmall { .. } => "ClassTooSmall",
        CountExceedsRemaining { .. } => "CountExceedsRemaining",
        KBelowTwo => "KBelowTwo",
        FewerPointsThanK { .. } => "FewerPointsThanK",
        SingleClassCollection => "SingleClassCollection",
        NoPrototypes => "NoPrototypes",
        UnknownId(_) => "UnknownId",
        MissingBundleField(_) => "MissingBundleField",
        UnsupportedCategory(_) => "UnsupportedCategory",
        UnknownRow(_) => "UnknownRow",
        MissingValidator(_) => "MissingValidator",
        InvalidThreshold(_) => "InvalidThreshold",
        ApplicantApproved(_) => "ApplicantApproved",
        OutOfRangeEdit { .. } => "OutOfRangeEdit",
        EmptyQuadrant { .. } => "EmptyQuadrant",
        EmptyText => "EmptyText",
        EmptyCorpus => "EmptyCorpus",
        CorruptFile(_) => "CorruptFile",
        Io(_) => "Io",
        Json(_) => "Json",
    }
}

impl AppError {
    pub fn code(&self) -> &'static str {
        match self {
            AppError::PortInUse(_) => "PortInUse",
            AppError::BadConfig(_) => "BadConfig",
            AppError::UnknownCollection(_) => "UnknownCollection",
            AppError::CollectionExists(_) => "CollectionExists",
            AppError::UnknownMethod(_) => "UnknownMethod",
            AppError::NoRoute(_) => "NoRoute",
            AppError::BadRequest(_) => "BadRequest",
            AppError::Plot(_) => "Plot",
            AppError::Core(e) => core_code(e),
            AppError::Io(_) => "Io",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            AppError::UnknownCollection(_) | AppError::UnknownMethod(_) | AppError::NoRoute(_) => {
                StatusCode::NOT_FOUND
            }
            AppError::CollectionExists(_) | AppError::PortInUse(_) => StatusCode::CONFLICT,
            AppError::BadRequest(_) | AppError::BadConfig(_) => StatusCode::BAD_REQUEST,
            AppError::Io(_) | AppError::Plot(_) => StatusCode::INTERNAL_SERVER_ERROR,
            AppError::Core(e) => match e {
                CoreError::UnknownId(_) => StatusCode::NOT_FOUND,
                CoreError::DuplicateId(_) => StatusCode::CONFLICT,
                CoreError::Io(_) | CoreError::CorruptFile(_) | CoreError::Json(_) => {
                    StatusCode::INTERNAL_SERVER_ERROR
                }
                _ => StatusCode::BAD_REQUEST,
            },
        }
    }

    /// Structured fields of the failure, where the error carries any.
    fn detail(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            AppError::Core(CoreError::DimensionMismatch { expected, found }) => {
                json!({"expected": expected, "found": found})
            }
            AppError::Core(CoreError::OutOfRangeEdit { feature, value, min, max }) => {
                json!({"feature": feature, "value": value, "min": min, "max": max})
            }
            AppError::Core(CoreError::ClassTooSmall { class, size, requested }) => {
                json!({"class": class, "size": size, "requested": requested})
            }
            AppError::Core(CoreError::EmptyQuadrant { quadrant, size, min }) => {
                json!({"quadrant": quadrant, "size": size, "min": min})
            }
            AppError::Core(CoreError::UnknownId(id) | CoreError::ApplicantApproved(id)) => json!({"id": id}),
            AppError::UnknownCollection(name) | AppError::CollectionExists(name) => json!({"collection": name}),
            AppError::UnknownMethod(m) => json!({"method": m}),
            _ => serde_json::Value::Null,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody {
            code: self.code(),
            message: self.to_string(),
            detail: self.detail(),
        }
    }
}

impl IntoResponse for AppError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}
