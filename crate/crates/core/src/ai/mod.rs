//! Scene description and conversational assistance.

mod chat;
mod context;
mod describe;
mod mock;
mod prompt;
mod provider;

pub use chat::{ChatSession, ChatTurn, ContextEntry};
pub use context::{assemble_geo_context, GeoContext, GeoPlace};
pub use describe::{describe_view, parse_structured, Description, StructuredDescription};
pub use mock::{MockFaults, MockModelProvider, RuleTable, MOCK_RULES_JSON};
pub use prompt::{
    render_chat_prompt, render_describer_prompt, render_structured_suffix, DescriberMode, DEFAULT_PROFILE_CLAUSE,
    FOCUS_AREAS,
};
pub use provider::{ChatChannel, ChatSetup, ContextPart, DescribeRequest, FunctionCall, ModelError, ModelProvider, ModelReply};

use serde::{Deserialize, Serialize};

use crate::session::{PanDirection, StepDirection};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AiError {
    #[error("model error: {0}")]
    Model(#[from] ModelError),
    #[error("structured reply did not match the schema: {0}")]
    Schema(String),
    #[error("chat is closed")]
    ChatClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ChatCommand {
    TurnLeft45,
    TurnLeft90,
    TurnRight45,
    TurnRight90,
    TurnAround,
    MoveForward,
    MoveBackward,
    MoveToIntersection,
}

/// One primitive navigation operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NavOp {
    Pan(PanDirection),
    Step(StepDirection),
    Jump,
}

impl ChatCommand {
    pub const ALL: [ChatCommand; 8] = [
        ChatCommand::TurnLeft45,
        ChatCommand::TurnLeft90,
        ChatCommand::TurnRight45,
        ChatCommand::TurnRight90,
        ChatCommand::TurnAround,
        ChatCommand::MoveForward,
        ChatCommand::MoveBackward,
        ChatCommand::MoveToIntersection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChatCommand::TurnLeft45 => "turnLeft45",
            ChatCommand::TurnLeft90 => "turnLeft90",
            ChatCommand::TurnRight45 => "turnRight45",
            ChatCommand::TurnRight90 => "turnRight90",
            ChatCommand::TurnAround => "turnAround",
            ChatCommand::MoveForward => "moveForward",
            ChatCommand::MoveBackward => "moveBackward",
            ChatCommand::MoveToIntersection => "moveToIntersection",
        }
    }

    pub fn from_name(name: &str) -> Option<ChatCommand> {
        ChatCommand::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn ops(self) -> Vec<NavOp> {
        use NavOp::*;
        use PanDirection::*;
        match self {
            ChatCommand::TurnLeft45 => vec![Pan(Left)],
            ChatCommand::TurnLeft90 => vec![Pan(Left), Pan(Left)],
            ChatCommand::TurnRight45 => vec![Pan(Right)],
            ChatCommand::TurnRight90 => vec![Pan(Right), Pan(Right)],
            ChatCommand::TurnAround => vec![Pan(Right); 4],
            ChatCommand::MoveForward => vec![Step(StepDirection::Forward)],
            ChatCommand::MoveBackward => vec![Step(StepDirection::Backward)],
            ChatCommand::MoveToIntersection => vec![Jump],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FunctionDeclaration {
    pub name: &'static str,
    pub description: &'static str,
}

pub const DECLARATIONS: [FunctionDeclaration; 8] = [
    FunctionDeclaration { name: "turnLeft45", description: "Turn the view 45 degrees to the left." },
    FunctionDeclaration { name: "turnLeft90", description: "Turn the view 90 degrees to the left." },
    FunctionDeclaration { name: "turnRight45", description: "Turn the view 45 degrees to the right." },
    FunctionDeclaration { name: "turnRight90", description: "Turn the view 90 degrees to the right." },
    FunctionDeclaration { name: "turnAround", description: "Face the opposite direction." },
    FunctionDeclaration { name: "moveForward", description: "Step to the next panorama in the facing direction." },
    FunctionDeclaration { name: "moveBackward", description: "Step to the next panorama behind, keeping the heading." },
    FunctionDeclaration {
        name: "moveToIntersection",
        description: "Jump ahead to the next intersection, or as far as possible along the road.",
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_cover_every_command() {
        for (d, c) in DECLARATIONS.iter().zip(ChatCommand::ALL) {
            assert_eq!(d.name, c.name());
            assert_eq!(ChatCommand::from_name(d.name), Some(c));
        }
        assert_eq!(ChatCommand::from_name("teleport"), None);
    }

    #[test]
    fn command_serde_uses_function_names() {
        for c in ChatCommand::ALL {
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.name()));
        }
    }

    #[test]
    fn turn_ops_net_rotation() {
        for c in ChatCommand::ALL {
            let net: i32 = c
                .ops()
                .iter()
                .map(|op| match op {
                    NavOp::Pan(PanDirection::Left) => -45,
                    NavOp::Pan(PanDirection::Right) => 45,
                    _ => 0,
                })
                .sum();
            let expected = match c {
                ChatCommand::TurnLeft45 => -45,
                ChatCommand::TurnLeft90 => -90,
                ChatCommand::TurnRight45 => 45,
                ChatCommand::TurnRight90 => 90,
                ChatCommand::TurnAround => 180,
                _ => 0,
            };
            assert_eq!(net, expected, "{c:?}");
        }
    }
}
