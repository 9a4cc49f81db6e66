use serde::{Deserialize, Serialize};

use super::{DescriberMode, FunctionDeclaration, GeoContext};
use crate::world::ViewCapture;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("model unavailable: {0}")]
    Unavailable(String),
    #[error("model timed out")]
    Timeout,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescribeRequest {
    pub prompt: String,
    pub view: ViewCapture,
    pub context: GeoContext,
    pub mode: DescriberMode,
    pub structured: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatSetup {
    pub system_prompt: String,
    pub declarations: Vec<FunctionDeclaration>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContextPart {
    View(ViewCapture),
    Geo(GeoContext),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionCall {
    pub name: String,
    #[serde(default)]
    pub args: serde_json::Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelReply {
    pub text: String,
    pub function_calls: Vec<FunctionCall>,
}

pub trait ModelProvider: Send + Sync {
    fn name(&self) -> &str;
    /// Returns the raw model text; JSON when `structured` is set.
    fn describe(&self, req: &DescribeRequest) -> Result<String, ModelError>;
    fn open(&self, setup: ChatSetup) -> Result<Box<dyn ChatChannel>, ModelError>;
}

pub trait ChatChannel: Send {
    fn send(&mut self, parts: Vec<ContextPart>) -> Result<(), ModelError>;
    fn turn(&mut self, input: &str) -> Result<ModelReply, ModelError>;
    fn close(&mut self);
}
