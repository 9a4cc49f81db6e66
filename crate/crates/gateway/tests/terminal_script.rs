use std::io::BufReader;
use std::path::PathBuf;
use std::sync::Arc;

use srai_core::ai::DescriberMode;
use srai_core::engine::transcript_line;
use srai_core::nav::NavConfig;
use srai_core::session::ManualClock;
use srai_gateway::api::StartSpec;
use srai_gateway::service::GatewaySession;
use srai_gateway::setup::{open_navigator, SessionOptions};
use srai_gateway::stream::StreamItem;
use srai_gateway::terminal::Terminal;

fn here(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn session() -> GatewaySession {
    let opts = SessionOptions {
        fixture: "builtin:bankside".into(),
        start: Some(StartSpec { pano_id: Some("acropolis".into()), heading: None }),
        config: NavConfig::default(),
        profile: None,
        log_path: None,
    };
    let (nav, f) = open_navigator(&opts, Arc::new(ManualClock::new(1_750_000_000_000))).unwrap();
    GatewaySession::new("script", &f.name, nav, None)
}

fn replay() -> (String, GatewaySession) {
    let script = std::fs::File::open(here("scripts/journey.keys")).unwrap();
    let mut term = Terminal::new(session(), Vec::new(), DescriberMode::Default);
    term.run_script(BufReader::new(script)).unwrap();
    let (s, out) = term.into_parts();
    (String::from_utf8(out).unwrap(), s)
}

#[test]
fn scripted_journey_matches_golden_transcript() {
    let (actual, _) = replay();
    let path = here("golden/journey.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).expect("golden missing; run with UPDATE_GOLDEN=1");
    assert_eq!(actual, expected);
}

#[test]
fn scripted_journey_is_deterministic() {
    assert_eq!(replay().0, replay().0);
}

#[test]
fn printed_lines_are_the_streamed_messages() {
    let (out, s) = replay();
    let printed: Vec<&str> = out.lines().filter(|l| l.starts_with("[status]") || l.starts_with("[chat]")).collect();
    let streamed: Vec<String> = s
        .stream()
        .read_from(0)
        .into_iter()
        .filter_map(|i| match i {
            StreamItem::Message { message, .. } if !message.text.is_empty() => Some(transcript_line(&message)),
            _ => None,
        })
        .collect();
    assert_eq!(printed, streamed);
}

#[test]
fn unbound_keys_get_a_help_hint() {
    let (out, _) = replay();
    assert!(out.contains("[help] Alt+Z is not bound. Type :help for the key list."));
    assert!(out.contains("[help] unknown key \"Shift+X\""));
}
