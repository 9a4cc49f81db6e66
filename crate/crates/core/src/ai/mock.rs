//! Deterministic stand-in for a multimodal model. It "sees" a view through
//! the fixture annotations and follows a versioned rule table for commands.

use std::sync::{Arc, Mutex, OnceLock};

use regex::Regex;
use serde::Deserialize;

use super::{
    ChatChannel, ChatSetup, ContextPart, DescribeRequest, DescriberMode, FunctionCall, GeoContext, ModelError,
    ModelProvider, ModelReply,
};
use crate::announce::text::{article, format_distance, join_list};
use crate::geo::{relative_heading, Octant, RelativePosition};
use crate::world::{MapProvider, ViewCapture};

pub const MOCK_RULES_JSON: &str = include_str!("../../data/mock_rules.json");

const MOBILITY_TAGS: [&str; 6] = ["sidewalk", "crosswalk", "entrance ramp", "curb ramp", "bus stop sign", "bus shelter"];
const OBSTACLE_TAGS: [&str; 7] = ["trash can", "fire hydrant", "parked car", "fence", "bench", "bike rack", "construction"];
const MASS_NOUNS: [&str; 1] = ["outdoor seating"];

#[derive(Debug, Deserialize)]
struct RawRules {
    version: u32,
    clause_separators: Vec<String>,
    commands: Vec<RawCommand>,
    questions: RawQuestions,
}

#[derive(Debug, Deserialize)]
struct RawCommand {
    pattern: String,
    command: String,
    reply: String,
}

#[derive(Debug, Deserialize)]
struct RawQuestions {
    exists: String,
    #[serde(rename = "where")]
    locate: String,
    describe: String,
    nearby: String,
}

#[derive(Debug)]
pub struct CommandRule {
    pub pattern: Regex,
    pub command: String,
    pub reply: String,
}

#[derive(Debug)]
pub struct RuleTable {
    pub version: u32,
    separators: Regex,
    pub commands: Vec<CommandRule>,
    exists: Regex,
    locate: Regex,
    describe: Regex,
    nearby: Regex,
}

fn compile(p: &str) -> Result<Regex, String> {
    Regex::new(p).map_err(|e| format!("bad pattern {p:?}: {e}"))
}

impl RuleTable {
    pub fn parse(json: &str) -> Result<RuleTable, String> {
        let raw: RawRules = serde_json::from_str(json).map_err(|e| e.to_string())?;
        if raw.version != 1 {
            return Err(format!("unsupported rule table version {}", raw.version));
        }
        let commands = raw
            .commands
            .into_iter()
            .map(|c| {
                if super::ChatCommand::from_name(&c.command).is_none() {
                    return Err(format!("unknown command {}", c.command));
                }
                Ok(CommandRule { pattern: compile(&c.pattern)?, command: c.command, reply: c.reply })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(RuleTable {
            version: raw.version,
            separators: compile(&raw.clause_separators.join("|"))?,
            commands,
            exists: compile(&raw.questions.exists)?,
            locate: compile(&raw.questions.locate)?,
            describe: compile(&raw.questions.describe)?,
            nearby: compile(&raw.questions.nearby)?,
        })
    }

    pub fn builtin() -> RuleTable {
        RuleTable::parse(MOCK_RULES_JSON).expect("bundled rule table is valid")
    }

    /// Commands in utterance order, with their canned replies.
    pub fn match_commands(&self, input: &str) -> Vec<(&str, &str)> {
        let norm = normalize(input);
        self.separators
            .split(&norm)
            .filter_map(|clause| {
                let clause = clause.trim();
                self.commands
                    .iter()
                    .find(|r| r.pattern.is_match(clause))
                    .map(|r| (r.command.as_str(), r.reply.as_str()))
            })
            .collect()
    }
}

fn normalize(input: &str) -> String {
    let lower = input.to_lowercase();
    let cleaned: String = lower.chars().filter(|c| !matches!(c, '?' | '!' | '.')).collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Direction of a view relative to the user's heading.
pub fn direction_phrase(view: Octant, heading: Octant) -> &'static str {
    let off = relative_heading(view.heading(), heading.heading()).degrees().round() as i32;
    match off {
        0 => "in front of you",
        45 => "ahead on your right",
        90 => "on your right",
        135 => "behind you on your right",
        -45 => "ahead on your left",
        -90 => "on your left",
        -135 => "behind you on your left",
        _ => "behind you",
    }
}

fn with_article(tag: &str) -> String {
    if MASS_NOUNS.contains(&tag) {
        tag.to_string()
    } else {
        format!("{} {tag}", article(tag))
    }
}

#[derive(Debug, Clone, Default)]
pub struct MockFaults {
    /// The next N structured describe calls return invalid JSON.
    pub malformed_structured: usize,
    pub unavailable: bool,
    pub timeout: bool,
}

#[derive(Clone)]
pub struct MockModelProvider {
    map: Arc<dyn MapProvider>,
    rules: Arc<RuleTable>,
    faults: Arc<Mutex<MockFaults>>,
}

impl MockModelProvider {
    pub fn new(map: Arc<dyn MapProvider>) -> MockModelProvider {
        static BUILTIN: OnceLock<Arc<RuleTable>> = OnceLock::new();
        let rules = BUILTIN.get_or_init(|| Arc::new(RuleTable::builtin())).clone();
        MockModelProvider { map, rules, faults: Arc::default() }
    }

    pub fn with_rules(map: Arc<dyn MapProvider>, rules: RuleTable) -> MockModelProvider {
        MockModelProvider { map, rules: Arc::new(rules), faults: Arc::default() }
    }

    pub fn set_faults(&self, faults: MockFaults) {
        *self.faults.lock().unwrap() = faults;
    }

    fn check_faults(&self) -> Result<(), ModelError> {
        let f = self.faults.lock().unwrap();
        if f.timeout {
            return Err(ModelError::Timeout);
        }
        if f.unavailable {
            return Err(ModelError::Unavailable("mock configured as unavailable".into()));
        }
        Ok(())
    }

    /// Annotations of one view, as the mock perceives it.
    pub fn tags(&self, view: &ViewCapture) -> Vec<String> {
        match self.map.view(&view.pano_id, view.heading) {
            Ok(Some(v)) => v.annotations,
            _ => Vec::new(),
        }
    }

    fn describe_text(&self, view: &ViewCapture, ctx: &GeoContext, mode: DescriberMode) -> String {
        let road = self
            .map
            .panorama(&view.pano_id)
            .ok()
            .flatten()
            .map(|p| p.address.road_name)
            .unwrap_or_else(|| "an unnamed road".into());
        let tags = self.tags(view);
        let mut out = format!("You are looking {} along {road}.", view.heading.name());
        if tags.is_empty() {
            out.push_str(" Nothing stands out in this view.");
        } else {
            let items: Vec<String> = tags.iter().map(|t| with_article(t)).collect();
            out.push_str(&format!(" In view: {}.", join_list(&items)));
        }
        let ahead = ctx.nearby_places.iter().find(|p| p.relative_position == RelativePosition::InFront);
        match (mode, ahead) {
            (DescriberMode::Default, Some(p)) => {
                out.push_str(&format!(" {} is ahead, about {} away.", p.name, format_distance(p.distance)));
            }
            (DescriberMode::TourGuide, _) => {
                if let Some(p) = ahead.or(ctx.nearby_places.first()) {
                    match &p.editorial_summary {
                        Some(s) => out.push_str(&format!(" Nearby is {}. {s}", p.name)),
                        None => out.push_str(&format!(
                            " Nearby is {}, {} {}.",
                            p.name,
                            article(&p.place_type),
                            p.place_type.replace('_', " ")
                        )),
                    }
                }
            }
            _ => {}
        }
        out
    }

    fn describe_structured(&self, view: &ViewCapture, ctx: &GeoContext, mode: DescriberMode) -> String {
        let tags = self.tags(view);
        let mobility: Vec<&String> = tags.iter().filter(|t| MOBILITY_TAGS.contains(&t.as_str())).collect();
        let obstacles: Vec<&String> = tags.iter().filter(|t| OBSTACLE_TAGS.contains(&t.as_str())).collect();
        let safety = if obstacles.is_empty() {
            "No obstacles are visible in this direction.".to_string()
        } else {
            let items: Vec<String> = obstacles.iter().map(|t| with_article(t)).collect();
            format!("Watch for {} near the walking path.", join_list(&items))
        };
        let first = match tags.first() {
            Some(t) => format!("Where exactly is the {t}?"),
            None => "Is there a crosswalk nearby?".to_string(),
        };
        let followups = vec![
            first,
            "What is to my left?".to_string(),
            "What is the closest intersection?".to_string(),
        ];
        serde_json::json!({
            "description": self.describe_text(view, ctx, mode),
            "mobility_features": mobility,
            "obstacles": obstacles,
            "safety_summary": safety,
            "followups": followups,
        })
        .to_string()
    }
}

impl ModelProvider for MockModelProvider {
    fn name(&self) -> &str {
        "mock"
    }

    fn describe(&self, req: &DescribeRequest) -> Result<String, ModelError> {
        self.check_faults()?;
        let (mode, ctx) = (req.mode, &req.context);
        if req.structured {
            let mut f = self.faults.lock().unwrap();
            if f.malformed_structured > 0 {
                f.malformed_structured -= 1;
                return Ok("{\"description\": \"truncated".into());
            }
            drop(f);
            return Ok(self.describe_structured(&req.view, ctx, mode));
        }
        Ok(self.describe_text(&req.view, ctx, mode))
    }

    fn open(&self, _setup: ChatSetup) -> Result<Box<dyn ChatChannel>, ModelError> {
        self.check_faults()?;
        Ok(Box::new(MockChannel { provider: self.clone(), views: Vec::new(), geo: None, closed: false }))
    }
}

struct MockChannel {
    provider: MockModelProvider,
    views: Vec<ViewCapture>,
    geo: Option<GeoContext>,
    closed: bool,
}

impl MockChannel {
    fn current(&self) -> Option<&ViewCapture> {
        self.views.last()
    }

    /// Views seen at the current pano, newest last, with their tags.
    fn seen_here(&self) -> Vec<(Octant, Vec<String>)> {
        let Some(cur) = self.current() else { return Vec::new() };
        let mut out: Vec<(Octant, Vec<String>)> = Vec::new();
        for v in self.views.iter().filter(|v| v.pano_id == cur.pano_id) {
            if !out.iter().any(|(o, _)| *o == v.heading) {
                out.push((v.heading, self.provider.tags(v)));
            }
        }
        out
    }

    fn find(&self, thing: &str) -> Option<(String, Octant)> {
        let heading = self.current()?.heading;
        let mut candidates = vec![thing.to_string()];
        if let Some(s) = thing.strip_suffix("es") {
            candidates.push(s.to_string());
        }
        if let Some(s) = thing.strip_suffix('s') {
            candidates.push(s.to_string());
        }
        let mut best: Option<(String, Octant, f64)> = None;
        for (oct, tags) in self.seen_here() {
            for tag in tags {
                if !candidates.contains(&tag) {
                    continue;
                }
                let off = relative_heading(oct.heading(), heading.heading()).degrees();
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => off.abs() < b.abs() - 1e-6 || ((off.abs() - b.abs()).abs() <= 1e-6 && off > *b),
                };
                if better {
                    best = Some((tag, oct, off));
                }
            }
        }
        best.map(|(t, o, _)| (t, o))
    }

    fn answer(&self, input: &str) -> String {
        let rules = &self.provider.rules;
        let q = normalize(input);
        let Some(cur) = self.current() else {
            return "I haven't received a view yet.".into();
        };
        let heading = cur.heading;
        if let Some(c) = rules.exists.captures(&q) {
            let thing = c["thing"].trim().to_string();
            return match self.find(&thing) {
                Some((tag, oct)) => {
                    format!("Yes, there is {} {}.", with_article(&tag), direction_phrase(oct, heading))
                }
                None => format!("No, I don't see {}.", with_article(&thing)),
            };
        }
        if let Some(c) = rules.locate.captures(&q) {
            let thing = c["thing"].trim().to_string();
            return match self.find(&thing) {
                Some((tag, oct)) => format!("The {tag} is {}.", direction_phrase(oct, heading)),
                None => format!("I don't see {} from here.", with_article(&thing)),
            };
        }
        if rules.describe.is_match(&q) {
            let ctx = self.geo.clone().unwrap_or_else(|| empty_geo(heading));
            return self.provider.describe_text(cur, &ctx, DescriberMode::Default);
        }
        if rules.nearby.is_match(&q) {
            let places = self.geo.as_ref().map(|g| g.nearby_places.clone()).unwrap_or_default();
            if places.is_empty() {
                return "I don't know of any places close by.".into();
            }
            let items: Vec<String> = places
                .iter()
                .take(3)
                .map(|p| format!("{} about {} away", p.name, format_distance(p.distance)))
                .collect();
            return format!("Close by: {}.", join_list(&items));
        }
        "I'm not sure. You can ask whether something is in view, where something is, or ask me to move or turn.".into()
    }
}

fn empty_geo(heading: Octant) -> GeoContext {
    GeoContext {
        selected_place: None,
        closest_address: String::new(),
        heading,
        neighborhood: None,
        city: String::new(),
        state: None,
        country: String::new(),
        nearby_places: Vec::new(),
    }
}

impl ChatChannel for MockChannel {
    fn send(&mut self, parts: Vec<ContextPart>) -> Result<(), ModelError> {
        if self.closed {
            return Err(ModelError::Unavailable("channel closed".into()));
        }
        for p in parts {
            match p {
                ContextPart::View(v) => self.views.push(v),
                ContextPart::Geo(g) => self.geo = Some(g),
                ContextPart::Text(_) => {}
            }
        }
        Ok(())
    }

    fn turn(&mut self, input: &str) -> Result<ModelReply, ModelError> {
        if self.closed {
            return Err(ModelError::Unavailable("channel closed".into()));
        }
        self.provider.check_faults()?;
        let commands = self.provider.rules.match_commands(input);
        if !commands.is_empty() {
            let text = commands.iter().map(|(_, r)| *r).collect::<Vec<_>>().join(" ");
            let function_calls = commands
                .iter()
                .map(|(c, _)| FunctionCall { name: c.to_string(), args: serde_json::Value::Null })
                .collect();
            return Ok(ModelReply { text, function_calls });
        }
        Ok(ModelReply { text: self.answer(input), function_calls: Vec::new() })
    }

    fn close(&mut self) {
        self.closed = true;
    }
}
