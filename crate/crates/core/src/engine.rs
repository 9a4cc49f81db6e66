//! One user's navigator: session state, the status voice and the AI
//! assistant behind a single action interface.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ai::{
    assemble_geo_context, describe_view, AiError, ChatCommand, ChatSession, DescriberMode, MockModelProvider, ModelProvider, NavOp,
    StructuredDescription, UserProfile,
};
use crate::announce::{
    self, build_local_context, frag, Channel, FragmentKind, LocalContext, StatusMessage,
};
use crate::geo::{GeoPoint, Octant};
use crate::nav::{detect_intersection_along, NavConfig};
use crate::session::{
    ChatTurnRecord, Clock, DescribeRecord, EventBody, LogSink, MoveOutcome, PanDirection, Position, Session,
    SessionError, StepDirection,
};
use crate::world::{MapProvider, StreetAddress, ViewCapture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfoKind {
    Where,
    Nearby,
    Intersections,
    Movements,
    Visits,
    Photo,
}

impl InfoKind {
    pub const ALL: [InfoKind; 6] =
        [InfoKind::Where, InfoKind::Nearby, InfoKind::Intersections, InfoKind::Movements, InfoKind::Visits, InfoKind::Photo];

    pub fn name(self) -> &'static str {
        match self {
            InfoKind::Where => "where",
            InfoKind::Nearby => "nearby",
            InfoKind::Intersections => "intersections",
            InfoKind::Movements => "movements",
            InfoKind::Visits => "visits",
            InfoKind::Photo => "photo",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    #[default]
    Typed,
    Speech,
}

/// Everything a user can ask the navigator to do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    PanLeft,
    PanRight,
    StepForward,
    StepBackward,
    Back,
    Jump,
    Teleport {
        query: String,
    },
    Describe {
        #[serde(default = "default_mode")]
        mode: DescriberMode,
        #[serde(default)]
        structured: bool,
    },
    ChatOpen,
    ChatTurn {
        input: String,
        #[serde(default)]
        source: InputSource,
    },
    ChatClose,
    Info {
        kind: InfoKind,
    },
    Repeat,
    StopSpeech,
}

fn default_mode() -> DescriberMode {
    DescriberMode::Default
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::PanLeft => "pan_left",
            Action::PanRight => "pan_right",
            Action::StepForward => "step_forward",
            Action::StepBackward => "step_backward",
            Action::Back => "back",
            Action::Jump => "jump",
            Action::Teleport { .. } => "teleport",
            Action::Describe { .. } => "describe",
            Action::ChatOpen => "chat_open",
            Action::ChatTurn { .. } => "chat_turn",
            Action::ChatClose => "chat_close",
            Action::Info { .. } => "info",
            Action::Repeat => "repeat",
            Action::StopSpeech => "stop_speech",
        }
    }
}

/// Serializable view of where the user is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub pano_id: String,
    pub heading: Octant,
    pub location: GeoPoint,
    pub address: StreetAddress,
    pub chat_open: bool,
    pub events: usize,
}

/// One line of a two-voice transcript.
pub fn transcript_line(m: &StatusMessage) -> String {
    let prefix = match m.channel {
        Channel::Status => "[status]",
        Channel::Chat => "[chat]",
    };
    format!("{prefix} {}", m.text)
}

pub struct Navigator {
    session: Session,
    model: Option<Arc<dyn ModelProvider>>,
    profile: UserProfile,
    chat: Option<ChatSession>,
    last: Option<StatusMessage>,
    last_description: Option<StructuredDescription>,
}

fn error_message(e: &SessionError) -> StatusMessage {
    match e {
        SessionError::NotFound(q) => StatusMessage::single(FragmentKind::Error, "error.not_found", &[("query", q)]),
        SessionError::NoImagery { query, radius } => StatusMessage::single(
            FragmentKind::Error,
            "error.no_imagery",
            &[("query", query), ("distance", &announce::text::format_distance(*radius))],
        ),
        SessionError::NothingToUndo => StatusMessage::single(FragmentKind::Error, "error.nothing_to_undo", &[]),
        _ => StatusMessage::single(FragmentKind::Error, "error.provider", &[]),
    }
}

fn ai_error_message(e: &AiError) -> StatusMessage {
    match e {
        AiError::ChatClosed => StatusMessage::single(FragmentKind::Error, "error.chat_closed", &[]),
        _ => StatusMessage::single(FragmentKind::Error, "error.ai", &[]),
    }
}

impl Navigator {
    pub fn new(session: Session, model: Option<Arc<dyn ModelProvider>>, profile: UserProfile) -> Navigator {
        Navigator { session, model, profile, chat: None, last: None, last_description: None }
    }

    /// A navigator whose assistant is the offline mock model.
    pub fn with_mock(
        map: Arc<dyn MapProvider>,
        cfg: NavConfig,
        start: Position,
        clock: Arc<dyn Clock>,
        sink: Box<dyn LogSink>,
    ) -> Result<Navigator, SessionError> {
        let session = Session::start(map.clone(), cfg, start, clock, sink)?;
        let model: Arc<dyn ModelProvider> = Arc::new(MockModelProvider::new(map));
        Ok(Navigator::new(session, Some(model), UserProfile::default()))
    }

    pub fn set_profile(&mut self, profile: UserProfile) {
        self.profile = profile;
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn session_mut(&mut self) -> &mut Session {
        &mut self.session
    }

    pub fn config(&self) -> &NavConfig {
        self.session.config()
    }

    pub fn chat(&self) -> Option<&ChatSession> {
        self.chat.as_ref()
    }

    pub fn last_message(&self) -> Option<&StatusMessage> {
        self.last.as_ref()
    }

    /// Structured result of the most recent describe, with its followups.
    pub fn last_description(&self) -> Option<&StructuredDescription> {
        self.last_description.as_ref()
    }

    pub fn snapshot(&self) -> Result<Snapshot, SessionError> {
        let pano = self.session.current_pano()?;
        Ok(Snapshot {
            pano_id: pano.id,
            heading: self.session.state().heading,
            location: pano.location,
            address: pano.address,
            chat_open: self.chat.as_ref().is_some_and(ChatSession::is_open),
            events: self.session.events().len(),
        })
    }

    pub fn local_context(&self) -> Result<LocalContext, SessionError> {
        let pano = self.session.current_pano()?;
        Ok(build_local_context(self.session.map().as_ref(), &pano, self.session.state().heading, self.config())?)
    }

    pub fn capture_view(&self) -> ViewCapture {
        let pos = self.session.state().position();
        let image_ref = match self.session.map().view(&pos.pano_id, pos.heading) {
            Ok(Some(v)) => v.image_ref,
            _ => format!("{}/{}", pos.pano_id, pos.heading.name()),
        };
        ViewCapture::new(&pos.pano_id, pos.heading, self.config().capture_size, image_ref)
    }

    /// Runs one action and returns what should be voiced, in order.
    pub fn handle(&mut self, action: &Action) -> Vec<StatusMessage> {
        let out = match action {
            Action::Repeat => return self.last.clone().into_iter().collect(),
            Action::StopSpeech => {
                self.session.hotkey("stop-speech", None);
                return vec![StatusMessage::single(FragmentKind::Signal, "speech.stop", &[])];
            }
            Action::PanLeft => self.run_op(NavOp::Pan(PanDirection::Left)),
            Action::PanRight => self.run_op(NavOp::Pan(PanDirection::Right)),
            Action::StepForward => self.run_op(NavOp::Step(StepDirection::Forward)),
            Action::StepBackward => self.run_op(NavOp::Step(StepDirection::Backward)),
            Action::Jump => self.run_op(NavOp::Jump),
            Action::Back => self.go_back(),
            Action::Teleport { query } => self.teleport(query),
            Action::Describe { mode, structured } => self.describe(*mode, *structured),
            Action::ChatOpen => self.chat_open(),
            Action::ChatTurn { input, source } => self.chat_turn(input, *source),
            Action::ChatClose => self.chat_close(),
            Action::Info { kind } => self.info(*kind),
        };
        if let Some(m) = out.iter().rev().find(|m| !m.text.is_empty()) {
            self.last = Some(m.clone());
        }
        out
    }

    fn context_or_error(&self) -> Result<(LocalContext, crate::nav::EgocentricGraph), SessionError> {
        Ok((self.local_context()?, self.session.graph()?))
    }

    fn run_op(&mut self, op: NavOp) -> Vec<StatusMessage> {
        match self.try_op(op) {
            Ok(m) => vec![m],
            Err(e) => vec![e],
        }
    }

    /// Ok carries the success message, Err the message explaining a failure.
    fn try_op(&mut self, op: NavOp) -> Result<StatusMessage, StatusMessage> {
        match op {
            NavOp::Pan(dir) => {
                let outcome = self.session.pan(dir);
                let (ctx, graph) = self.context_or_error().map_err(|e| error_message(&e))?;
                self.view_changed(&ctx);
                Ok(announce::pan_announcement(&outcome, &graph, &ctx, self.config()))
            }
            NavOp::Step(dir) => {
                let prev = self.local_context().map_err(|e| error_message(&e))?;
                match self.session.step(dir) {
                    Ok(outcome) => self.moved(&prev, &outcome),
                    Err(SessionError::NoMove(_)) => Err(self.blocked(Some(dir))),
                    Err(e) => Err(error_message(&e)),
                }
            }
            NavOp::Jump => {
                let prev = self.local_context().map_err(|e| error_message(&e))?;
                match self.session.jump() {
                    Ok(outcome) => self.moved(&prev, &outcome),
                    Err(SessionError::NoMove(_)) => Err(self.blocked(Some(StepDirection::Forward))),
                    Err(e) => Err(error_message(&e)),
                }
            }
        }
    }

    fn blocked(&self, dir: Option<StepDirection>) -> StatusMessage {
        match self.session.graph() {
            Ok(g) => announce::available_movements_announcement(&g, self.session.state().heading, dir, self.config()),
            Err(e) => error_message(&e),
        }
    }

    fn moved(&mut self, prev: &LocalContext, outcome: &MoveOutcome) -> Result<StatusMessage, StatusMessage> {
        let ctx = self.local_context().map_err(|e| error_message(&e))?;
        self.view_changed(&ctx);
        let visit = self.session.visit_info();
        Ok(announce::movement_announcement(prev, &ctx, outcome, &visit, self.config()))
    }

    fn go_back(&mut self) -> Vec<StatusMessage> {
        let prev = match self.local_context() {
            Ok(c) => c,
            Err(e) => return vec![error_message(&e)],
        };
        match self.session.go_back() {
            Ok(outcome) => vec![self.moved(&prev, &outcome).unwrap_or_else(|m| m)],
            Err(e) => vec![error_message(&e)],
        }
    }

    fn teleport(&mut self, query: &str) -> Vec<StatusMessage> {
        let outcome = match self.session.teleport(query) {
            Ok(o) => o,
            Err(e) => return vec![error_message(&e)],
        };
        match self.context_or_error() {
            Ok((ctx, graph)) => {
                self.view_changed(&ctx);
                vec![announce::teleport_announcement(&outcome, &ctx, &graph, self.config())]
            }
            Err(e) => vec![error_message(&e)],
        }
    }

    /// Sends the new view to an open chat.
    fn view_changed(&mut self, ctx: &LocalContext) {
        if !self.chat.as_ref().is_some_and(ChatSession::is_open) {
            return;
        }
        let view = self.capture_view();
        let selected = self.session.selected_place().ok().flatten();
        let geo = assemble_geo_context(ctx, selected.as_ref());
        if let Some(chat) = self.chat.as_mut() {
            if let Err(e) = chat.push_view(view, geo) {
                log::warn!("could not send view to chat: {e}");
            }
        }
    }

    fn describe(&mut self, mode: DescriberMode, structured: bool) -> Vec<StatusMessage> {
        let Some(model) = self.model.clone() else {
            return vec![ai_error_message(&AiError::Schema("no model configured".into()))];
        };
        let ctx = match self.local_context() {
            Ok(c) => c,
            Err(e) => return vec![error_message(&e)],
        };
        let selected = self.session.selected_place().ok().flatten();
        let geo = assemble_geo_context(&ctx, selected.as_ref());
        let view = self.capture_view();
        match describe_view(model.as_ref(), &view, &geo, &self.profile, mode, structured) {
            Ok(d) => {
                self.session.record(EventBody::Describe(DescribeRecord {
                    pano_id: view.pano_id.clone(),
                    heading: view.heading,
                    mode: mode.name().into(),
                    structured,
                    prompt: d.prompt.clone(),
                    response: d.response.clone(),
                }));
                self.last_description = d.structured.clone();
                vec![StatusMessage::chat(d.text())]
            }
            Err(e) => {
                log::warn!("describe failed: {e}");
                self.session.hotkey("describe-failed", Some(e.to_string()));
                vec![ai_error_message(&e)]
            }
        }
    }

    fn chat_open(&mut self) -> Vec<StatusMessage> {
        if self.chat.as_ref().is_some_and(ChatSession::is_open) {
            return vec![StatusMessage::single(FragmentKind::Chat, "chat.opened", &[])];
        }
        match self.open_chat() {
            Ok(()) => vec![StatusMessage::single(FragmentKind::Chat, "chat.opened", &[])],
            Err(m) => vec![m],
        }
    }

    fn open_chat(&mut self) -> Result<(), StatusMessage> {
        let Some(model) = self.model.clone() else {
            return Err(ai_error_message(&AiError::Schema("no model configured".into())));
        };
        let chat = ChatSession::open(model.as_ref(), &self.profile, self.config()).map_err(|e| {
            log::warn!("chat unavailable: {e}");
            ai_error_message(&e)
        })?;
        self.chat = Some(chat);
        self.session.hotkey("chat-open", None);
        let ctx = self.local_context().map_err(|e| error_message(&e))?;
        self.view_changed(&ctx);
        Ok(())
    }

    fn chat_turn(&mut self, input: &str, source: InputSource) -> Vec<StatusMessage> {
        if !self.chat.as_ref().is_some_and(ChatSession::is_open) {
            if let Err(m) = self.open_chat() {
                return vec![m];
            }
        }
        let turn = match self.chat.as_mut().map(|c| c.turn(input)) {
            Some(Ok(t)) => t,
            Some(Err(e)) => return vec![ai_error_message(&e)],
            None => return vec![ai_error_message(&AiError::ChatClosed)],
        };
        if source == InputSource::Speech {
            self.session.hotkey("speech-input", None);
        }
        self.session.record(EventBody::ChatTurn(ChatTurnRecord {
            input: input.into(),
            reply: turn.reply.clone(),
            commands: turn.commands.iter().map(|c| c.name().to_string()).collect(),
            rejected_calls: turn.rejected_calls.clone(),
        }));
        let mut out = vec![StatusMessage::chat(&turn.reply)];
        for cmd in turn.commands {
            out.extend(self.dispatch_command(cmd));
        }
        out
    }

    /// Executes a chat command through the same operations as the hotkeys.
    pub fn dispatch_command(&mut self, cmd: ChatCommand) -> Vec<StatusMessage> {
        let mut out = Vec::new();
        for op in cmd.ops() {
            match self.try_op(op) {
                Ok(m) => out.push(m),
                Err(m) => {
                    let direction = match cmd {
                        ChatCommand::MoveBackward => "backward",
                        _ => "forward",
                    };
                    out.push(StatusMessage::new(
                        Channel::Chat,
                        vec![frag(FragmentKind::Chat, "chat.cannot_move", &[("direction", direction)])],
                    ));
                    out.push(m);
                    break;
                }
            }
        }
        out
    }

    fn chat_close(&mut self) -> Vec<StatusMessage> {
        let Some(chat) = self.chat.as_mut() else {
            return vec![ai_error_message(&AiError::ChatClosed)];
        };
        if !chat.close() {
            return vec![ai_error_message(&AiError::ChatClosed)];
        }
        let turns = chat.turns().len();
        self.session.hotkey("chat-close", Some(format!("{turns} turns")));
        self.session.flush();
        vec![StatusMessage::single(FragmentKind::Chat, "chat.closed", &[])]
    }

    fn info(&mut self, kind: InfoKind) -> Vec<StatusMessage> {
        self.session.hotkey(kind.name(), None);
        let msg = match self.info_message(kind) {
            Ok(m) => m,
            Err(e) => error_message(&e),
        };
        vec![msg]
    }

    fn info_message(&self, kind: InfoKind) -> Result<StatusMessage, SessionError> {
        let cfg = self.config();
        Ok(match kind {
            InfoKind::Where => announce::where_announcement(&self.local_context()?),
            InfoKind::Nearby => announce::nearby_places_announcement(&self.local_context()?, cfg),
            InfoKind::Intersections => {
                let ctx = self.local_context()?;
                let next =
                    detect_intersection_along(self.session.map().as_ref(), ctx.location, ctx.heading.heading(), cfg)?;
                announce::intersection_announcement(&ctx, next.as_ref(), cfg)
            }
            InfoKind::Movements => self.blocked(None),
            InfoKind::Visits => announce::visits_announcement(&self.session.visit_info(), self.session.now_ms()),
            InfoKind::Photo => announce::pano_metadata_announcement(&self.session.current_pano()?),
        })
    }

    /// Closes the chat and flushes the log.
    pub fn close(&mut self) {
        if self.chat.is_some() {
            self.chat_close();
        }
        self.session.close();
    }
}
