//! Navigation state machine.
//!
//! Every mutation is expressed as a [`SessionEvent`] and applied through
//! [`SessionState::apply`], both live and when replaying an exported log, so
//! a log alone reconstructs the state it was recorded from.

mod log;

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{haversine_distance, initial_bearing, GeoPoint, Octant};
use crate::nav::{build_egocentric_graph, jump_target, EgocentricGraph, IntersectionHit, JumpKind, NavConfig, NavError};
use crate::world::{MapProvider, Panorama, Place, ProviderError, SearchHit, StreetAddress};

pub use self::log::{export_ndjson, parse_ndjson, EventLog, FileSink, LogSink, LogStats, MemorySink, NullSink, FLUSH_EVERY};

/// Version stamped on every exported record.
pub const EVENT_SCHEMA_VERSION: u32 = 1;

pub trait Clock: Send + Sync {
    /// Milliseconds since the Unix epoch.
    fn now_ms(&self) -> u64;
}

pub struct SystemClock;

impl Clock for SystemClock {
    fn now_ms(&self) -> u64 {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
    }
}

/// Deterministic clock for tests and scripted runs.
#[derive(Debug, Default)]
pub struct ManualClock(AtomicU64);

impl ManualClock {
    pub fn new(start_ms: u64) -> ManualClock {
        ManualClock(AtomicU64::new(start_ms))
    }

    pub fn advance(&self, ms: u64) {
        self.0.fetch_add(ms, Ordering::SeqCst);
    }

    pub fn set(&self, ms: u64) {
        self.0.store(ms, Ordering::SeqCst);
    }
}

impl Clock for ManualClock {
    fn now_ms(&self) -> u64 {
        self.0.load(Ordering::SeqCst)
    }
}

impl<C: Clock + ?Sized> Clock for Arc<C> {
    fn now_ms(&self) -> u64 {
        (**self).now_ms()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub pano_id: String,
    pub heading: Octant,
}

impl Position {
    pub fn new(pano_id: &str, heading: Octant) -> Position {
        Position { pano_id: pano_id.to_string(), heading }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PanDirection {
    Left,
    Right,
}

impl PanDirection {
    pub fn steps(self) -> i32 {
        match self {
            PanDirection::Left => -1,
            PanDirection::Right => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepDirection {
    Forward,
    Backward,
}

impl StepDirection {
    pub fn word(self) -> &'static str {
        match self {
            StepDirection::Forward => "forward",
            StepDirection::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitRecord {
    pub count: u32,
    pub first_ms: u64,
    pub last_ms: u64,
    /// Arrival before the most recent one.
    pub previous_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisitSummary {
    pub pano_id: String,
    pub count: u32,
    pub arrived_ms: u64,
    pub previous_visit_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub current_pano_id: String,
    pub heading: Octant,
    pub visits: BTreeMap<String, VisitRecord>,
    pub undo_stack: VecDeque<Position>,
    pub undo_depth: usize,
    pub selected_place: Option<String>,
}

// ---- event records ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanRecord {
    pub direction: PanDirection,
    pub from: Octant,
    pub to: Octant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub direction: StepDirection,
    pub from: Position,
    pub to_pano: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    pub from: Position,
    pub to_pano: String,
    pub distance: f64,
    pub kind: JumpKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportRecord {
    pub query: String,
    pub from: Position,
    pub to: Position,
    pub destination_name: String,
    pub destination: GeoPoint,
    pub place_id: Option<String>,
    /// Great-circle distance from the origin pano to the destination.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoBackRecord {
    pub from: Position,
    pub to: Position,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescribeRecord {
    pub pano_id: String,
    pub heading: Octant,
    pub mode: String,
    pub structured: bool,
    pub prompt: String,
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatTurnRecord {
    pub input: String,
    pub reply: String,
    pub commands: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected_calls: Vec<String>,
}

/// Info keys, failed moves, chat open/close, and the session start marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotkeyRecord {
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Set only by the `start` action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Position>,
}

pub const START_ACTION: &str = "start";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum EventBody {
    Pan(PanRecord),
    Step(StepRecord),
    Jump(JumpRecord),
    Teleport(TeleportRecord),
    GoBack(GoBackRecord),
    Describe(DescribeRecord),
    ChatTurn(ChatTurnRecord),
    Hotkey(HotkeyRecord),
}

impl EventBody {
    pub fn kind(&self) -> &'static str {
        match self {
            EventBody::Pan(_) => "Pan",
            EventBody::Step(_) => "Step",
            EventBody::Jump(_) => "Jump",
            EventBody::Teleport(_) => "Teleport",
            EventBody::GoBack(_) => "GoBack",
            EventBody::Describe(_) => "Describe",
            EventBody::ChatTurn(_) => "ChatTurn",
            EventBody::Hotkey(_) => "Hotkey",
        }
    }

    /// Whether applying the event changes what the user is looking at.
    pub fn changes_view(&self) -> bool {
        matches!(
            self,
            EventBody::Pan(_) | EventBody::Step(_) | EventBody::Jump(_) | EventBody::Teleport(_) | EventBody::GoBack(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionEvent {
    pub v: u32,
    pub ts: u64,
    #[serde(flatten)]
    pub body: EventBody,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReplayError {
    #[error("log does not begin with a start record")]
    MissingStart,
    #[error("record {index} is inconsistent with the replayed state: {reason}")]
    Inconsistent { index: usize, reason: String },
}

impl SessionState {
    pub fn new(start: Position, undo_depth: usize, ts: u64) -> SessionState {
        let mut s = SessionState {
            current_pano_id: start.pano_id.clone(),
            heading: start.heading,
            visits: BTreeMap::new(),
            undo_stack: VecDeque::new(),
            undo_depth,
            selected_place: None,
        };
        s.arrive(&start.pano_id, ts);
        s
    }

    pub fn position(&self) -> Position {
        Position::new(&self.current_pano_id, self.heading)
    }

    fn arrive(&mut self, pano_id: &str, ts: u64) {
        let rec = self
            .visits
            .entry(pano_id.to_string())
            .or_insert(VisitRecord { count: 0, first_ms: ts, last_ms: ts, previous_ms: None });
        if rec.count > 0 {
            rec.previous_ms = Some(rec.last_ms);
        }
        rec.count += 1;
        rec.last_ms = ts;
    }

    fn push_undo(&mut self, p: Position) {
        if self.undo_depth == 0 {
            return;
        }
        self.undo_stack.push_back(p);
        while self.undo_stack.len() > self.undo_depth {
            self.undo_stack.pop_front();
        }
    }

    fn move_to(&mut self, from: &Position, to: Position, ts: u64) {
        self.push_undo(from.clone());
        self.current_pano_id = to.pano_id.clone();
        self.heading = to.heading;
        self.arrive(&to.pano_id, ts);
    }

    fn check_from(&self, from: &Position, index: usize) -> Result<(), ReplayError> {
        if *from != self.position() {
            return Err(ReplayError::Inconsistent {
                index,
                reason: format!("expected to start at {:?}, state is at {:?}", from, self.position()),
            });
        }
        Ok(())
    }

    /// Applies one record. `index` is only used in error reports.
    pub fn apply(&mut self, ev: &SessionEvent, index: usize) -> Result<(), ReplayError> {
        match &ev.body {
            EventBody::Pan(r) => {
                if r.from != self.heading {
                    return Err(ReplayError::Inconsistent { index, reason: "pan from a different heading".into() });
                }
                self.heading = r.to;
            }
            EventBody::Step(r) => {
                self.check_from(&r.from, index)?;
                self.move_to(&r.from, Position::new(&r.to_pano, r.from.heading), ev.ts);
            }
            EventBody::Jump(r) => {
                self.check_from(&r.from, index)?;
                self.move_to(&r.from, Position::new(&r.to_pano, r.from.heading), ev.ts);
            }
            EventBody::Teleport(r) => {
                self.check_from(&r.from, index)?;
                self.move_to(&r.from, r.to.clone(), ev.ts);
                self.selected_place = r.place_id.clone();
            }
            EventBody::GoBack(r) => {
                self.check_from(&r.from, index)?;
                match self.undo_stack.pop_back() {
                    Some(p) if p == r.to => {}
                    _ => return Err(ReplayError::Inconsistent { index, reason: "undo stack mismatch".into() }),
                }
                self.move_to(&r.from, r.to.clone(), ev.ts);
            }
            EventBody::Hotkey(r) if r.action == START_ACTION => {
                return Err(ReplayError::Inconsistent { index, reason: "second start record".into() });
            }
            EventBody::Describe(_) | EventBody::ChatTurn(_) | EventBody::Hotkey(_) => {}
        }
        Ok(())
    }

    /// Rebuilds state from a complete exported log.
    pub fn replay(events: &[SessionEvent], undo_depth: usize) -> Result<SessionState, ReplayError> {
        let first = events.first().ok_or(ReplayError::MissingStart)?;
        let start = match &first.body {
            EventBody::Hotkey(HotkeyRecord { action, position: Some(p), .. }) if action == START_ACTION => p.clone(),
            _ => return Err(ReplayError::MissingStart),
        };
        let mut state = SessionState::new(start, undo_depth, first.ts);
        for (i, ev) in events.iter().enumerate().skip(1) {
            state.apply(ev, i)?;
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("cannot move {0}")]
    NoMove(String),
    #[error("nothing to go back to")]
    NothingToUndo,
    #[error("no match for \"{0}\"")]
    NotFound(String),
    #[error("no imagery within {radius} meters of \"{query}\"")]
    NoImagery { query: String, radius: f64 },
    #[error(transparent)]
    Nav(NavError),
    #[error(transparent)]
    Provider(#[from] ProviderError),
}

impl From<NavError> for SessionError {
    fn from(e: NavError) -> Self {
        match e {
            NavError::Provider(p) => SessionError::Provider(p),
            other => SessionError::Nav(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanOutcome {
    pub direction: PanDirection,
    pub from: Octant,
    pub to: Octant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Step(StepDirection),
    Jump(JumpKind),
    GoBack,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveOutcome {
    pub kind: MoveKind,
    pub from: Position,
    pub to: Position,
    pub distance: f64,
    pub intersection: Option<IntersectionHit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    pub query: String,
    pub from: Position,
    pub to: Position,
    pub origin_label: String,
    pub origin_address: StreetAddress,
    pub destination: SearchHit,
    pub distance: f64,
}

/// One user's navigation session over a map.
pub struct Session {
    map: Arc<dyn MapProvider>,
    cfg: NavConfig,
    clock: Arc<dyn Clock>,
    state: SessionState,
    log: EventLog,
}

impl Session {
    pub fn start(
        map: Arc<dyn MapProvider>,
        cfg: NavConfig,
        start: Position,
        clock: Arc<dyn Clock>,
        sink: Box<dyn LogSink>,
    ) -> Result<Session, SessionError> {
        if map.panorama(&start.pano_id)?.is_none() {
            return Err(SessionError::Nav(NavError::UnknownPano(start.pano_id)));
        }
        let ts = clock.now_ms();
        let state = SessionState::new(start.clone(), cfg.undo_depth, ts);
        let mut log = EventLog::new(sink);
        log.append(SessionEvent {
            v: EVENT_SCHEMA_VERSION,
            ts,
            body: EventBody::Hotkey(HotkeyRecord { action: START_ACTION.into(), detail: None, position: Some(start) }),
        });
        Ok(Session { map, cfg, clock, state, log })
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn config(&self) -> &NavConfig {
        &self.cfg
    }

    pub fn map(&self) -> &Arc<dyn MapProvider> {
        &self.map
    }

    pub fn log(&self) -> &EventLog {
        &self.log
    }

    pub fn events(&self) -> &[SessionEvent] {
        self.log.events()
    }

    pub fn now_ms(&self) -> u64 {
        self.clock.now_ms()
    }

    pub fn current_pano(&self) -> Result<Panorama, SessionError> {
        self.pano(&self.state.current_pano_id)
    }

    fn pano(&self, id: &str) -> Result<Panorama, SessionError> {
        self.map.panorama(id)?.ok_or_else(|| SessionError::Nav(NavError::UnknownPano(id.to_string())))
    }

    pub fn graph(&self) -> Result<EgocentricGraph, SessionError> {
        Ok(build_egocentric_graph(self.map.as_ref(), &self.current_pano()?, &self.cfg)?)
    }

    pub fn selected_place(&self) -> Result<Option<Place>, SessionError> {
        match &self.state.selected_place {
            Some(id) => Ok(self.map.place(id)?),
            None => Ok(None),
        }
    }

    /// Records an event and applies it. Timestamps never go backwards.
    pub fn record(&mut self, body: EventBody) -> &SessionEvent {
        let ts = self.clock.now_ms().max(self.log.last_ts().unwrap_or(0));
        let ev = SessionEvent { v: EVENT_SCHEMA_VERSION, ts, body };
        let index = self.log.events().len();
        self.state.apply(&ev, index).expect("live events are consistent with the state");
        self.log.append(ev);
        self.log.events().last().unwrap()
    }

    pub fn hotkey(&mut self, action: &str, detail: Option<String>) {
        self.record(EventBody::Hotkey(HotkeyRecord { action: action.into(), detail, position: None }));
    }

    pub fn pan(&mut self, direction: PanDirection) -> PanOutcome {
        let from = self.state.heading;
        let to = from.turn(direction.steps());
        self.record(EventBody::Pan(PanRecord { direction, from, to }));
        PanOutcome { direction, from, to }
    }

    pub fn step(&mut self, direction: StepDirection) -> Result<MoveOutcome, SessionError> {
        let graph = self.graph()?;
        let heading = self.state.heading.heading();
        let target = match direction {
            StepDirection::Forward => graph.next_pano(heading, &self.cfg),
            StepDirection::Backward => graph.prev_pano(heading, &self.cfg),
        };
        let Some(target) = target.cloned() else {
            self.hotkey("step-blocked", Some(direction.word().into()));
            return Err(SessionError::NoMove(direction.word().into()));
        };
        let from = self.state.position();
        self.record(EventBody::Step(StepRecord {
            direction,
            from: from.clone(),
            to_pano: target.pano_id.clone(),
            distance: target.distance,
        }));
        Ok(MoveOutcome {
            kind: MoveKind::Step(direction),
            to: Position::new(&target.pano_id, from.heading),
            from,
            distance: target.distance,
            intersection: None,
        })
    }

    pub fn jump(&mut self) -> Result<MoveOutcome, SessionError> {
        let origin = self.current_pano()?;
        let target = match jump_target(self.map.as_ref(), &origin, self.state.heading.heading(), &self.cfg) {
            Ok(t) => t,
            Err(NavError::NoMovement) => {
                self.hotkey("jump-blocked", None);
                return Err(SessionError::NoMove("forward".into()));
            }
            Err(e) => return Err(e.into()),
        };
        let from = self.state.position();
        self.record(EventBody::Jump(JumpRecord {
            from: from.clone(),
            to_pano: target.pano_id.clone(),
            distance: target.distance,
            kind: target.kind,
        }));
        Ok(MoveOutcome {
            kind: MoveKind::Jump(target.kind),
            to: Position::new(&target.pano_id, from.heading),
            from,
            distance: target.distance,
            intersection: target.intersection,
        })
    }

    pub fn go_back(&mut self) -> Result<MoveOutcome, SessionError> {
        let Some(to) = self.state.undo_stack.back().cloned() else {
            self.hotkey("back-empty", None);
            return Err(SessionError::NothingToUndo);
        };
        let from = self.state.position();
        let a = self.pano(&from.pano_id)?.location;
        let b = self.pano(&to.pano_id)?.location;
        self.record(EventBody::GoBack(GoBackRecord { from: from.clone(), to: to.clone() }));
        Ok(MoveOutcome { kind: MoveKind::GoBack, from, to, distance: haversine_distance(a, b), intersection: None })
    }

    /// Label for where the user is teleporting from: the selected place if
    /// it is still nearby, otherwise the street address.
    fn origin_label(&self, pano: &Panorama) -> Result<String, SessionError> {
        if let Some(place) = self.selected_place()? {
            if haversine_distance(pano.location, place.location) <= self.cfg.nearby_radius {
                return Ok(place.display_name);
            }
        }
        Ok(pano.address.street_line())
    }

    pub fn teleport(&mut self, query: &str) -> Result<TeleportOutcome, SessionError> {
        let hits = self.map.search_text(query)?;
        let Some(hit) = hits.into_iter().next() else {
            self.hotkey("teleport-not-found", Some(query.into()));
            return Err(SessionError::NotFound(query.into()));
        };
        let (pano, gap) = match self.map.nearest_pano(hit.location) {
            Ok(found) => found,
            Err(ProviderError::NotFound(_)) => (self.current_pano()?, f64::INFINITY),
            Err(e) => return Err(e.into()),
        };
        if gap > self.cfg.teleport_max_distance {
            self.hotkey("teleport-no-imagery", Some(query.into()));
            return Err(SessionError::NoImagery { query: query.into(), radius: self.cfg.teleport_max_distance });
        }
        let origin = self.current_pano()?;
        let heading = match initial_bearing(pano.location, hit.location) {
            Ok(b) => b.snap(),
            // already standing on the destination
            Err(_) => self.state.heading,
        };
        let from = self.state.position();
        let to = Position::new(&pano.id, heading);
        let distance = haversine_distance(origin.location, hit.location);
        let origin_label = self.origin_label(&origin)?;
        self.record(EventBody::Teleport(TeleportRecord {
            query: query.into(),
            from: from.clone(),
            to: to.clone(),
            destination_name: hit.display_name.clone(),
            destination: hit.location,
            place_id: hit.place_id.clone(),
            distance,
        }));
        Ok(TeleportOutcome {
            query: query.into(),
            from,
            to,
            origin_label,
            origin_address: origin.address,
            destination: hit,
            distance,
        })
    }

    pub fn visit_info(&self) -> VisitSummary {
        let rec = self.state.visits[&self.state.current_pano_id];
        VisitSummary {
            pano_id: self.state.current_pano_id.clone(),
            count: rec.count,
            arrived_ms: rec.last_ms,
            previous_visit_ms: rec.previous_ms,
        }
    }

    pub fn flush(&mut self) {
        self.log.flush();
    }

    pub fn close(&mut self) {
        self.log.close();
    }

    pub fn export_log(&self) -> String {
        self.log.export()
    }
}
