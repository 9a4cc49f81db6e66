//! The egocentric panorama graph and intersection-aware jumping.

mod config;
mod graph;
mod jump;

use thiserror::Error;

use crate::world::ProviderError;

pub use config::{ConfigError, NavConfig};
pub use graph::{build_egocentric_graph, link_movements, EgocentricGraph, Neighbor};
pub use jump::{borders_other_road, current_intersection, detect_intersection_along, jump_target, IntersectionHit, JumpKind, JumpTarget};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NavError {
    #[error("no panorama is reachable along this heading")]
    NoMovement,
    #[error("unknown panorama {0}")]
    UnknownPano(String),
    #[error(transparent)]
    Provider(#[from] ProviderError),
}
