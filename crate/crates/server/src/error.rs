use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use cdgame_core::{GameError, GraphError};
use cdgame_proto::ApiError;

/// An error response: a status plus an [`ApiError`] body.
#[derive(Debug)]
pub struct AppError {
    pub status: StatusCode,
    pub body: ApiError,
}

impl AppError {
    pub fn bad_request(message: impl Into<String>) -> Self {
        AppError { status: StatusCode::BAD_REQUEST, body: ApiError::new("bad-request", message) }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        AppError { status: StatusCode::NOT_FOUND, body: ApiError::new("not-found", format!("no {what} `{id}`")) }
    }

    pub fn conflict(code: &str, message: impl Into<String>) -> Self {
        AppError { status: StatusCode::CONFLICT, body: ApiError::new(code, message) }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        AppError { status: StatusCode::INTERNAL_SERVER_ERROR, body: ApiError::new("internal", message) }
    }
}

impl IntoResponse for AppError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<GameError> for AppError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::IllegalMove { cause, .. } | GameError::IllegalAt { cause, .. } => AppError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: ApiError::illegal(cause.as_str()),
            },
            GameError::GameOver => AppError::conflict("game-over", e.to_string()),
            GameError::Graph(GraphError::UnknownLabel(label)) => AppError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: ApiError {
                    error: "unknown-vertex".into(),
                    cause: None,
                    message: Some(format!("no vertex labeled `{label}`")),
                },
            },
            other => AppError::bad_request(other.to_string()),
        }
    }
}

impl From<GraphError> for AppError {
    fn from(e: GraphError) -> Self {
        AppError::bad_request(e.to_string())
    }
}

impl From<JsonRejection> for AppError {
    fn from(e: JsonRejection) -> Self {
        AppError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for AppError {
    fn from(e: QueryRejection) -> Self {
        AppError::bad_request(e.body_text())
    }
}

impl From<PathRejection> for AppError {
    fn from(e: PathRejection) -> Self {
        AppError::bad_request(e.body_text())
    }
}
