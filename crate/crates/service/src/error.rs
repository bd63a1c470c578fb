use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use nvh_core::linking::LinkError;
use nvh_core::view::{ScaleError, ViewError};
use serde_json::json;
use thiserror::Error;

/// Failure of a single request, mapped onto an HTTP status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApiError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Invalid(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            Self::NotFound(_) => StatusCode::NOT_FOUND,
            Self::Conflict(_) => StatusCode::CONFLICT,
            Self::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    pub fn not_found(msg: impl Into<String>) -> Self {
        Self::NotFound(msg.into())
    }
}

impl From<LinkError> for ApiError {
    fn from(e: LinkError) -> Self {
        match e {
            LinkError::UnknownRegion(_)
            | LinkError::UnknownBand(_)
            | LinkError::UnknownCell(_)
            | LinkError::UnknownHarmonic(_) => Self::NotFound(e.to_string()),
            LinkError::LayoutMismatch { .. } => Self::Conflict(e.to_string()),
            LinkError::View(v) => v.into(),
            LinkError::HarmonicOutsideBand { .. } | LinkError::NoBand | LinkError::Steps => {
                Self::Invalid(e.to_string())
            }
        }
    }
}

impl From<ViewError> for ApiError {
    fn from(e: ViewError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<ScaleError> for ApiError {
    fn from(e: ScaleError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        Self::Invalid(e.body_text())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::Invalid(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        let body = json!({ "status": status.as_u16(), "error": self.to_string() });
        (status, Json(body)).into_response()
    }
}
