use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{
    render_chat_prompt, AiError, ChatChannel, ChatCommand, ChatSetup, ContextPart, GeoContext, ModelProvider,
    UserProfile, DECLARATIONS,
};
use crate::nav::NavConfig;
use crate::world::ViewCapture;

#[derive(Debug, Clone, PartialEq)]
pub enum ContextEntry {
    View { capture: ViewCapture, tokens: usize },
    Turn { tokens: usize },
}

impl ContextEntry {
    fn tokens(&self) -> usize {
        match self {
            ContextEntry::View { tokens, .. } | ContextEntry::Turn { tokens } => *tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatTurn {
    pub input: String,
    pub reply: String,
    pub commands: Vec<ChatCommand>,
    pub rejected_calls: Vec<String>,
}

/// An open conversation plus a running estimate of its context size.
pub struct ChatSession {
    channel: Option<Box<dyn ChatChannel>>,
    system_prompt: String,
    system_tokens: usize,
    entries: VecDeque<ContextEntry>,
    pushed: Vec<ViewCapture>,
    turns: Vec<ChatTurn>,
    budget: usize,
    tokens_per_view: usize,
    chars_per_token: usize,
    keep_views: usize,
}

impl ChatSession {
    pub fn open(provider: &dyn ModelProvider, profile: &UserProfile, cfg: &NavConfig) -> Result<ChatSession, AiError> {
        let system_prompt = render_chat_prompt(profile);
        let channel =
            provider.open(ChatSetup { system_prompt: system_prompt.clone(), declarations: DECLARATIONS.to_vec() })?;
        let chars_per_token = cfg.chars_per_token.max(1);
        Ok(ChatSession {
            channel: Some(channel),
            system_tokens: system_prompt.chars().count().div_ceil(chars_per_token),
            system_prompt,
            entries: VecDeque::new(),
            pushed: Vec::new(),
            turns: Vec::new(),
            budget: cfg.chat_token_budget,
            tokens_per_view: cfg.tokens_per_view,
            chars_per_token,
            keep_views: cfg.chat_keep_views,
        })
    }

    pub fn is_open(&self) -> bool {
        self.channel.is_some()
    }

    pub fn system_prompt(&self) -> &str {
        &self.system_prompt
    }

    fn text_tokens(&self, s: &str) -> usize {
        s.chars().count().div_ceil(self.chars_per_token)
    }

    pub fn push_view(&mut self, view: ViewCapture, geo: GeoContext) -> Result<(), AiError> {
        let tokens = self.tokens_per_view + self.text_tokens(&geo.to_prompt_text());
        let ch = self.channel.as_mut().ok_or(AiError::ChatClosed)?;
        ch.send(vec![ContextPart::View(view.clone()), ContextPart::Geo(geo)])?;
        self.entries.push_back(ContextEntry::View { capture: view.clone(), tokens });
        self.pushed.push(view);
        self.trim();
        Ok(())
    }

    pub fn turn(&mut self, input: &str) -> Result<ChatTurn, AiError> {
        let ch = self.channel.as_mut().ok_or(AiError::ChatClosed)?;
        let reply = ch.turn(input)?;
        let mut commands = Vec::new();
        let mut rejected_calls = Vec::new();
        for call in &reply.function_calls {
            match ChatCommand::from_name(&call.name) {
                Some(c) => commands.push(c),
                None => {
                    log::warn!("model called unknown function {:?}", call.name);
                    rejected_calls.push(call.name.clone());
                }
            }
        }
        let tokens = self.text_tokens(input) + self.text_tokens(&reply.text);
        self.entries.push_back(ContextEntry::Turn { tokens });
        self.trim();
        let t = ChatTurn { input: input.to_string(), reply: reply.text, commands, rejected_calls };
        self.turns.push(t.clone());
        Ok(t)
    }

    /// Returns false when already closed.
    pub fn close(&mut self) -> bool {
        match self.channel.take() {
            Some(mut ch) => {
                ch.close();
                true
            }
            None => false,
        }
    }

    pub fn token_estimate(&self) -> usize {
        self.system_tokens + self.entries.iter().map(ContextEntry::tokens).sum::<usize>()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Views still inside the context window, oldest first.
    pub fn retained_views(&self) -> Vec<&ViewCapture> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                ContextEntry::View { capture, .. } => Some(capture),
                _ => None,
            })
            .collect()
    }

    /// Every view pushed since the chat opened.
    pub fn views_pushed(&self) -> &[ViewCapture] {
        &self.pushed
    }

    pub fn turns(&self) -> &[ChatTurn] {
        &self.turns
    }

    fn trim(&mut self) {
        while self.token_estimate() > self.budget {
            let views = self.entries.iter().filter(|e| matches!(e, ContextEntry::View { .. })).count();
            let mut seen_views = 0;
            let victim = self.entries.iter().position(|e| match e {
                ContextEntry::Turn { .. } => true,
                ContextEntry::View { .. } => {
                    seen_views += 1;
                    views - seen_views + 1 > self.keep_views
                }
            });
            match victim {
                Some(i) => {
                    self.entries.remove(i);
                }
                None => break,
            }
        }
    }
}

impl Drop for ChatSession {
    fn drop(&mut self) {
        self.close();
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::ai::MockModelProvider;
    use crate::geo::{GeoPoint, Octant};
    use crate::synth::FixtureBuilder;

    fn provider() -> MockModelProvider {
        let mut b = FixtureBuilder::new("c", GeoPoint::new(5.0, 5.0).unwrap());
        b.pano("p", 0.0, 0.0, "Elm Street");
        MockModelProvider::new(Arc::new(b.world()))
    }

    fn geo() -> GeoContext {
        GeoContext {
            selected_place: None,
            closest_address: "Elm Street".into(),
            heading: Octant::North,
            neighborhood: None,
            city: "Springfield".into(),
            state: None,
            country: "United States".into(),
            nearby_places: Vec::new(),
        }
    }

    fn view(i: usize) -> ViewCapture {
        let o = Octant::from_index(i % 8);
        ViewCapture::new("p", o, 640, format!("p/{}/{i}", o.name()))
    }

    #[test]
    fn close_is_idempotent() {
        let p = provider();
        let mut c = ChatSession::open(&p, &UserProfile::default(), &NavConfig::default()).unwrap();
        assert!(c.close());
        assert!(!c.close());
        assert_eq!(c.turn("hi").unwrap_err(), AiError::ChatClosed);
        assert_eq!(c.push_view(view(0), geo()).unwrap_err(), AiError::ChatClosed);
    }

    #[test]
    fn unknown_function_calls_are_rejected() {
        struct Rogue;
        struct RogueChannel;
        impl crate::ai::ChatChannel for RogueChannel {
            fn send(&mut self, _: Vec<ContextPart>) -> Result<(), crate::ai::ModelError> {
                Ok(())
            }
            fn turn(&mut self, _: &str) -> Result<crate::ai::ModelReply, crate::ai::ModelError> {
                Ok(crate::ai::ModelReply {
                    text: "ok".into(),
                    function_calls: vec![
                        crate::ai::FunctionCall { name: "deleteEverything".into(), args: serde_json::Value::Null },
                        crate::ai::FunctionCall { name: "turnAround".into(), args: serde_json::Value::Null },
                    ],
                })
            }
            fn close(&mut self) {}
        }
        impl ModelProvider for Rogue {
            fn name(&self) -> &str {
                "rogue"
            }
            fn describe(&self, _: &crate::ai::DescribeRequest) -> Result<String, crate::ai::ModelError> {
                Ok(String::new())
            }
            fn open(&self, _: ChatSetup) -> Result<Box<dyn ChatChannel>, crate::ai::ModelError> {
                Ok(Box::new(RogueChannel))
            }
        }
        let mut c = ChatSession::open(&Rogue, &UserProfile::default(), &NavConfig::default()).unwrap();
        let t = c.turn("x").unwrap();
        assert_eq!(t.commands, [ChatCommand::TurnAround]);
        assert_eq!(t.rejected_calls, ["deleteEverything"]);
    }

    #[test]
    fn trimming_keeps_recent_views_and_system_prompt() {
        let p = provider();
        let cfg = NavConfig { chat_token_budget: 4000, ..NavConfig::default() };
        let mut c = ChatSession::open(&p, &UserProfile::default(), &cfg).unwrap();
        for i in 0..40 {
            c.push_view(view(i), geo()).unwrap();
            c.turn("is there a bench").unwrap();
            assert!(c.token_estimate() <= cfg.chat_token_budget);
        }
        let kept = c.retained_views();
        assert!(kept.len() >= cfg.chat_keep_views);
        let tail: Vec<&ViewCapture> = c.views_pushed().iter().rev().take(kept.len()).rev().collect();
        assert_eq!(kept, tail);
        assert_eq!(c.views_pushed().len(), 40);
        assert!(c.system_prompt().contains("turnAround"));
    }

    proptest! {
        #[test]
        fn estimate_never_exceeds_budget(budget in 3000usize..20_000, ops in proptest::collection::vec(any::<bool>(), 1..80)) {
            let p = provider();
            let cfg = NavConfig { chat_token_budget: budget, ..NavConfig::default() };
            let mut c = ChatSession::open(&p, &UserProfile::default(), &cfg).unwrap();
            for (i, is_view) in ops.into_iter().enumerate() {
                if is_view {
                    c.push_view(view(i), geo()).unwrap();
                } else {
                    c.turn("where is the bench").unwrap();
                }
                prop_assert!(c.token_estimate() <= budget);
                let n = c.retained_views().len();
                prop_assert!(n >= c.views_pushed().len().min(cfg.chat_keep_views));
            }
        }
    }
}
