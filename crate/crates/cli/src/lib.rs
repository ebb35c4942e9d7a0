//! HTTP design service. Every request carries the whole complex, so the
//! service holds no state between requests.

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use rosette_core::complex::{Complex, ComplexDocument};
use rosette_core::patch::{TauMode, TauSweep};
use rosette_core::pipeline::{self, report_json, DesignParams, PipelineError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignRequest {
    complex: ComplexDocument,
    #[serde(default)]
    params: DesignParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepRequest {
    complex: ComplexDocument,
    #[serde(default)]
    sweep: TauSweep,
    #[serde(default)]
    tau_mode: TauMode,
}

/// An error response: status plus `{"error": ..., "report": [...]}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": message.into() }),
        }
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        let status = match e {
            PipelineError::InvalidComplex(_) | PipelineError::InvalidParams(_) => {
                StatusCode::BAD_REQUEST
            }
            PipelineError::Numeric(_) => StatusCode::UNPROCESSABLE_ENTITY,
            PipelineError::Failed(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut body = json!({ "error": e.to_string() });
        if let Some(r) = e.report() {
            body["report"] = report_json(r);
        }
        Self { status, body }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("malformed request: {e}")))
}

fn complex_of(doc: ComplexDocument) -> Result<Complex, ApiError> {
    doc.into_complex()
        .map_err(|e| ApiError::bad_request(format!("malformed complex: {e}")))
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        body: json!({ "error": format!("request failed: {e}") }),
    })?
}

async fn design(body: Bytes) -> Result<Json<Value>, ApiError> {
    let req: DesignRequest = parse_body(&body)?;
    let complex = complex_of(req.complex)?;
    let out = blocking(move || Ok(pipeline::run(&complex, &req.params)?)).await?;
    Ok(Json(out.to_json()))
}

async fn tau_sweep(body: Bytes) -> Result<Json<Value>, ApiError> {
    let req: SweepRequest = parse_body(&body)?;
    let complex = complex_of(req.complex)?;
    let curve =
        blocking(move || Ok(pipeline::tau_sweep(&complex, &req.sweep, req.tau_mode)?)).await?;
    Ok(Json(serde_json::to_value(curve).expect("curve serializes")))
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

pub fn router() -> Router {
    Router::new()
        .route("/v1/design", post(design))
        .route("/v1/tau-sweep", post(tau_sweep))
        .route("/v1/health", get(health))
}

/// Serves [`router`] on `addr` until the process is stopped.
pub async fn serve(addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}
