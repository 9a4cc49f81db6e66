//! Versioned JSON documents exchanged over HTTP.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use srai_core::announce::StatusMessage;
use srai_core::engine::{Action, Snapshot};
use srai_core::geo::Octant;
use srai_core::session::SessionError;

use crate::stream::StreamItem;

pub const API_VERSION: u32 = 1;

fn api_version() -> u32 {
    API_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSpec {
    /// The fixture's default start when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pano_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<Octant>,
}

/// Body of `POST /sessions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSessionRequest {
    #[serde(default = "api_version")]
    pub v: u32,
    /// `builtin:<name>` or a fixture file path; the server default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartSpec>,
    /// NavConfig fields to override, by name.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub config: Map<String, Value>,
    /// Free-text user profile replacing the default one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

impl Default for CreateSessionRequest {
    fn default() -> Self {
        CreateSessionRequest { v: API_VERSION, fixture: None, start: None, config: Map::new(), profile: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSessionResponse {
    pub v: u32,
    pub session_id: String,
    pub fixture: String,
    pub snapshot: Snapshot,
    pub next_seq: u64,
}

/// Body of `POST /sessions/{id}/actions`: the action fields sit at the top level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionRequest {
    #[serde(default = "api_version")]
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
    #[serde(flatten)]
    pub action: Action,
}

impl ActionRequest {
    pub fn new(action: Action) -> ActionRequest {
        ActionRequest { v: API_VERSION, session_id: None, action }
    }
}

/// Whether the gateway voices messages itself or leaves them to a screen reader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voicing {
    SelfVoiced,
    ScreenReader,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionResponse {
    pub v: u32,
    pub action: String,
    pub messages: Vec<StatusMessage>,
    pub snapshot: Snapshot,
    /// Suggested chat questions from a structured describe.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub followups: Vec<String>,
    pub voicing: Voicing,
    pub next_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventsResponse {
    pub v: u32,
    pub items: Vec<StreamItem>,
    pub next_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateResponse {
    pub v: u32,
    pub session_id: String,
    pub fixture: String,
    pub snapshot: Snapshot,
    pub last_message: Option<StatusMessage>,
    pub chat_turns: usize,
    pub next_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub v: u32,
    pub error: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),
    #[error("fixture: {0}")]
    Fixture(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl GatewayError {
    pub fn code(&self) -> &'static str {
        match self {
            GatewayError::UnknownSession(_) => "unknown_session",
            GatewayError::InvalidAction(_) => "invalid_action",
            GatewayError::InvalidRequest(_) => "invalid_request",
            GatewayError::UnsupportedVersion(_) => "unsupported_version",
            GatewayError::Fixture(_) => "fixture",
            GatewayError::Config(_) => "config",
            GatewayError::Session(_) => "session",
            GatewayError::Io(_) => "internal",
        }
    }

    pub fn http_status(&self) -> u16 {
        match self {
            GatewayError::UnknownSession(_) => 404,
            GatewayError::Io(_) => 500,
            _ => 400,
        }
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { v: API_VERSION, error: self.code().to_string(), message: self.to_string() }
    }
}

pub fn check_version(v: u32) -> Result<(), GatewayError> {
    if v == API_VERSION {
        Ok(())
    } else {
        Err(GatewayError::UnsupportedVersion(v))
    }
}
