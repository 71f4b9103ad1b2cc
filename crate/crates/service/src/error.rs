use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use litscope_gateway::GatewayError;
use serde_json::json;
use thiserror::Error;

use crate::engine::EngineError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServiceError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Upstream(String),
    #[error("{0}")]
    Internal(String),
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Upstream(_) => StatusCode::BAD_GATEWAY,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not_found",
            ServiceError::BadRequest(_) => "bad_request",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::Upstream(_) => "source_unavailable",
            ServiceError::Internal(_) => "internal",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"error": {"code": self.code(), "message": self.to_string()}})
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.to_json())).into_response()
    }
}

impl From<EngineError> for ServiceError {
    fn from(e: EngineError) -> Self {
        ServiceError::Upstream(e.to_string())
    }
}

impl From<GatewayError> for ServiceError {
    fn from(e: GatewayError) -> Self {
        match e {
            GatewayError::NotFound(_) => ServiceError::NotFound(e.to_string()),
            GatewayError::InvalidQuery(_) => ServiceError::BadRequest(e.to_string()),
            GatewayError::SourceUnavailable(_) | GatewayError::PartialData { .. } => ServiceError::Upstream(e.to_string()),
        }
    }
}

impl From<litscope_core::Error> for ServiceError {
    fn from(e: litscope_core::Error) -> Self {
        use litscope_core::Error as E;
        match e {
            E::StagedChangesPending => ServiceError::Conflict(e.to_string()),
            E::MissingScore(_) => ServiceError::Internal(e.to_string()),
            _ => ServiceError::BadRequest(e.to_string()),
        }
    }
}
