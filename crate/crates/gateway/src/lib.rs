//! HTTP gateway, event stream, speech plumbing and terminal client for `srai-core`.

pub mod api;
pub mod cli;
pub mod http;
pub mod keymap;
pub mod service;
pub mod setup;
pub mod speech;
pub mod stream;
pub mod terminal;

pub use api::{ActionRequest, ActionResponse, GatewayError, API_VERSION};
pub use service::{GatewaySession, Registry, ServiceConfig};
pub use stream::{EventStream, StreamItem};
