//! Sessions as the gateway sees them, and the registry that serves them.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use srai_core::announce::{Channel, FragmentKind};
use srai_core::engine::{Action, Navigator, Snapshot};
use srai_core::nav::NavConfig;
use srai_core::session::{Clock, SystemClock};

use crate::api::{
    check_version, ActionResponse, CreateSessionRequest, CreateSessionResponse, GatewayError, StateResponse, Voicing,
    API_VERSION,
};
use crate::setup::{apply_overrides, open_navigator, SessionOptions};
use crate::speech::Voicer;
use crate::stream::EventStream;

/// A navigator plus its outbound stream and optional voicing.
pub struct GatewaySession {
    id: String,
    fixture: String,
    nav: Navigator,
    stream: Arc<EventStream>,
    synced: usize,
    voicer: Option<Voicer>,
}

impl GatewaySession {
    pub fn new(id: &str, fixture: &str, nav: Navigator, voicer: Option<Voicer>) -> GatewaySession {
        let mut s = GatewaySession {
            id: id.to_string(),
            fixture: fixture.to_string(),
            nav,
            stream: Arc::new(EventStream::new()),
            synced: 0,
            voicer,
        };
        s.sync(&[]);
        s
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn fixture(&self) -> &str {
        &self.fixture
    }

    pub fn navigator(&self) -> &Navigator {
        &self.nav
    }

    pub fn stream(&self) -> &Arc<EventStream> {
        &self.stream
    }

    pub fn voicing(&self) -> Voicing {
        if self.voicer.is_some() {
            Voicing::SelfVoiced
        } else {
            Voicing::ScreenReader
        }
    }

    fn sync(&mut self, messages: &[srai_core::announce::StatusMessage]) {
        let events = &self.nav.session().events()[self.synced..];
        self.stream.append(events, messages);
        self.synced += events.len();
    }

    /// Runs exactly one action; messages are the engine's, unaltered.
    pub fn act(&mut self, action: &Action) -> Result<ActionResponse, GatewayError> {
        let messages = self.nav.handle(action);
        self.sync(&messages);
        if let Some(v) = &self.voicer {
            v.voice(&messages);
        }
        let described = messages.iter().any(|m| m.channel == Channel::Chat && !m.has(FragmentKind::Error));
        let followups = match action {
            Action::Describe { structured: true, .. } if described => {
                self.nav.last_description().map(|d| d.followups.clone()).unwrap_or_default()
            }
            _ => Vec::new(),
        };
        Ok(ActionResponse {
            v: API_VERSION,
            action: action.name().to_string(),
            messages,
            snapshot: self.snapshot()?,
            followups,
            voicing: self.voicing(),
            next_seq: self.stream.next_seq(),
        })
    }

    pub fn snapshot(&self) -> Result<Snapshot, GatewayError> {
        Ok(self.nav.snapshot()?)
    }

    pub fn state(&self) -> Result<StateResponse, GatewayError> {
        Ok(StateResponse {
            v: API_VERSION,
            session_id: self.id.clone(),
            fixture: self.fixture.clone(),
            snapshot: self.snapshot()?,
            last_message: self.nav.last_message().cloned(),
            chat_turns: self.nav.chat().map_or(0, |c| c.turns().len()),
            next_seq: self.stream.next_seq(),
        })
    }

    /// Closes chat and flushes the log; later events still reach the stream.
    pub fn close(&mut self) {
        self.nav.close();
        self.sync(&[]);
    }
}

/// Server-wide defaults applied to every new session.
#[derive(Clone)]
pub struct ServiceConfig {
    pub base_config: NavConfig,
    pub default_fixture: String,
    pub log_dir: Option<PathBuf>,
    pub voicer: Option<Voicer>,
    pub clock: Arc<dyn Clock>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            base_config: NavConfig::default(),
            default_fixture: "builtin:bankside".into(),
            log_dir: None,
            voicer: None,
            clock: Arc::new(SystemClock),
        }
    }
}

/// A live session behind a FIFO lock; the stream is readable without it.
pub struct SessionSlot {
    pub session: tokio::sync::Mutex<GatewaySession>,
    pub stream: Arc<EventStream>,
}

pub struct Registry {
    cfg: ServiceConfig,
    sessions: Mutex<BTreeMap<String, Arc<SessionSlot>>>,
    counter: AtomicU64,
}

impl Registry {
    pub fn new(cfg: ServiceConfig) -> Registry {
        Registry { cfg, sessions: Mutex::new(BTreeMap::new()), counter: AtomicU64::new(0) }
    }

    pub fn create(&self, req: &CreateSessionRequest) -> Result<CreateSessionResponse, GatewayError> {
        check_version(req.v)?;
        let id = format!("s{}", self.counter.fetch_add(1, Ordering::SeqCst) + 1);
        let opts = SessionOptions {
            fixture: req.fixture.clone().unwrap_or_else(|| self.cfg.default_fixture.clone()),
            start: req.start.clone(),
            config: apply_overrides(&self.cfg.base_config, &req.config)?,
            profile: req.profile.clone(),
            log_path: self.cfg.log_dir.as_ref().map(|d| d.join(format!("{id}.ndjson"))),
        };
        let (nav, fixture) = open_navigator(&opts, self.cfg.clock.clone())?;
        let session = GatewaySession::new(&id, &fixture.name, nav, self.cfg.voicer.clone());
        let resp = CreateSessionResponse {
            v: API_VERSION,
            session_id: id.clone(),
            fixture: fixture.name,
            snapshot: session.snapshot()?,
            next_seq: session.stream().next_seq(),
        };
        let slot = SessionSlot { stream: session.stream().clone(), session: tokio::sync::Mutex::new(session) };
        self.sessions.lock().unwrap().insert(id, Arc::new(slot));
        log::info!("session {} opened on {}", resp.session_id, resp.fixture);
        Ok(resp)
    }

    pub fn get(&self, id: &str) -> Result<Arc<SessionSlot>, GatewayError> {
        self.sessions.lock().unwrap().get(id).cloned().ok_or_else(|| GatewayError::UnknownSession(id.to_string()))
    }

    pub fn remove(&self, id: &str) -> Result<Arc<SessionSlot>, GatewayError> {
        self.sessions.lock().unwrap().remove(id).ok_or_else(|| GatewayError::UnknownSession(id.to_string()))
    }

    pub fn ids(&self) -> Vec<String> {
        self.sessions.lock().unwrap().keys().cloned().collect()
    }
}
