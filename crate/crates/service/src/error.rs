use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use cornerbase::game::MoveError;
use cornerbase::wire::ErrorBody;
use cornerbase::Error;

/// An error response: status plus a JSON [`ErrorBody`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, error: &str, message: impl Into<String>) -> ApiError {
        ApiError { status, body: ErrorBody { error: error.into(), message: message.into(), exit_code: None } }
    }

    pub fn with_exit(mut self, code: i32) -> ApiError {
        self.body.exit_code = Some(code);
        self
    }

    pub fn illegal(e: &MoveError) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.rule.code(), e.to_string())
    }

    pub fn not_waiting(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::CONFLICT, "out-of-turn", message)
    }

    pub fn no_session(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "no-such-session", format!("no session {id:?}"))
    }

    /// Maps a library error by its exit code: configuration problems are the
    /// caller's fault, numeric faults and I/O are the server's.
    pub fn from_core(e: &Error) -> ApiError {
        let code = e.exit_code();
        let (status, tag) = match code {
            2 => (StatusCode::BAD_REQUEST, "config"),
            3 => (StatusCode::INTERNAL_SERVER_ERROR, "numeric-fault"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
        };
        ApiError::new(status, tag, e.to_string()).with_exit(code)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

/// `Json` extractor whose rejections are JSON error bodies as well.
pub struct Body<T>(pub T);

impl<S, T> axum::extract::FromRequest<S> for Body<T>
where
    T: serde::de::DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: axum::extract::Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(r) => Err(ApiError::new(r.status(), "bad-request", r.body_text()).with_exit(2)),
        }
    }
}
