//! HTTP routes over the session registry.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;

use crate::api::{check_version, ActionRequest, CreateSessionRequest, EventsResponse, GatewayError, API_VERSION};
use crate::service::Registry;

/// Upper bound on a single long-poll wait.
pub const MAX_WAIT_MS: u64 = 30_000;

impl IntoResponse for GatewayError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.http_status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self.body())).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, GatewayError>;

pub fn router(registry: Arc<Registry>) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", axum::routing::delete(close_session))
        .route("/sessions/{id}/actions", post(post_action))
        .route("/sessions/{id}/events", get(get_events))
        .route("/sessions/{id}/state", get(get_state))
        .with_state(registry)
}

async fn create_session(
    State(reg): State<Arc<Registry>>,
    body: Bytes,
) -> Result<(StatusCode, Json<crate::api::CreateSessionResponse>), GatewayError> {
    let req: CreateSessionRequest = if body.iter().all(u8::is_ascii_whitespace) {
        CreateSessionRequest::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| GatewayError::InvalidRequest(e.to_string()))?
    };
    Ok((StatusCode::CREATED, Json(reg.create(&req)?)))
}

async fn list_sessions(State(reg): State<Arc<Registry>>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "v": API_VERSION, "sessions": reg.ids() }))
}

async fn close_session(State(reg): State<Arc<Registry>>, Path(id): Path<String>) -> ApiResult<crate::api::StateResponse> {
    let slot = reg.remove(&id)?;
    let mut s = slot.session.lock().await;
    s.close();
    Ok(Json(s.state()?))
}

async fn post_action(
    State(reg): State<Arc<Registry>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<crate::api::ActionResponse> {
    let slot = reg.get(&id)?;
    let req: ActionRequest = serde_json::from_slice(&body).map_err(|e| GatewayError::InvalidAction(e.to_string()))?;
    check_version(req.v)?;
    if let Some(sid) = &req.session_id {
        if *sid != id {
            return Err(GatewayError::InvalidRequest(format!("session_id {sid} does not match path {id}")));
        }
    }
    let mut s = slot.session.lock().await;
    Ok(Json(s.act(&req.action)?))
}

#[derive(Debug, Deserialize)]
struct EventsQuery {
    #[serde(default)]
    from: u64,
    #[serde(default)]
    wait_ms: u64,
}

async fn get_events(
    State(reg): State<Arc<Registry>>,
    Path(id): Path<String>,
    query: Result<Query<EventsQuery>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<EventsResponse> {
    let slot = reg.get(&id)?;
    let Query(q) = query.map_err(|e| GatewayError::InvalidRequest(e.body_text()))?;
    let wait = Duration::from_millis(q.wait_ms.min(MAX_WAIT_MS));
    let items = slot.stream.wait_from(q.from, wait).await;
    let next_seq = items.last().map_or_else(|| q.from.min(slot.stream.next_seq()), |i| i.seq() + 1);
    Ok(Json(EventsResponse { v: API_VERSION, items, next_seq }))
}

async fn get_state(State(reg): State<Arc<Registry>>, Path(id): Path<String>) -> ApiResult<crate::api::StateResponse> {
    let slot = reg.get(&id)?;
    let s = slot.session.lock().await;
    Ok(Json(s.state()?))
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, registry: Arc<Registry>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(registry))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
