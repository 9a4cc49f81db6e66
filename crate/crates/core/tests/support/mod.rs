#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use srai_core::engine::{transcript_line, Action, InfoKind, Navigator};
use srai_core::geo::Octant;
use srai_core::nav::NavConfig;
use srai_core::session::{ManualClock, NullSink, Position};
use srai_core::synth::{bankside_and_acropolis, crossroads, GridCity};
use srai_core::world::World;

pub const EPOCH_MS: u64 = 1_750_000_000_000;
pub const TICK_MS: u64 = 30_000;

pub struct Scenario {
    pub name: &'static str,
    pub fixture: &'static str,
    pub world: fn() -> World,
    pub start: &'static str,
    pub heading: Octant,
    pub actions: Vec<Action>,
}

fn bankside() -> World {
    bankside_and_acropolis().world()
}

fn cross() -> World {
    crossroads(41.0).world()
}

fn small_city() -> World {
    GridCity { avenues: 4, streets: 4, block_panos: 2, spacing: 9.0 }.build().world()
}

fn info(kind: InfoKind) -> Action {
    Action::Info { kind }
}

fn all_info() -> Vec<Action> {
    InfoKind::ALL.into_iter().map(info).collect()
}

pub fn scenarios() -> Vec<Scenario> {
    use Action::*;
    vec![
        Scenario {
            name: "pan",
            fixture: "bankside",
            world: bankside,
            start: "bankside",
            heading: Octant::South,
            actions: vec![PanRight, PanRight, PanRight, PanLeft, PanLeft, PanLeft, PanLeft, PanLeft, Repeat],
        },
        Scenario {
            name: "step",
            fixture: "grid 4x4",
            world: small_city,
            start: "c0_0",
            heading: Octant::North,
            actions: vec![
                StepForward,
                StepForward,
                StepForward,
                StepBackward,
                PanRight,
                PanRight,
                StepForward,
                StepForward,
                PanLeft,
                StepForward,
                Back,
                Back,
                PanRight,
                PanRight,
                PanRight,
                PanRight,
                StepForward,
            ],
        },
        Scenario {
            name: "jump",
            fixture: "crossroads",
            world: cross,
            start: "m0",
            heading: Octant::North,
            actions: vec![Jump, Jump, PanRight, PanRight, Jump, StepBackward, PanRight, PanRight, Jump, Jump, Jump],
        },
        Scenario {
            name: "teleport",
            fixture: "bankside",
            world: bankside,
            start: "acropolis",
            heading: Octant::North,
            actions: vec![
                Teleport { query: "Acropolis of Athens".into() },
                Teleport { query: "38 Bankside".into() },
                Teleport { query: "Atlantis".into() },
                Back,
            ],
        },
        Scenario {
            name: "info_keys",
            fixture: "crossroads",
            world: cross,
            start: "m0",
            heading: Octant::North,
            actions: {
                let mut v = all_info();
                v.push(Jump);
                v.extend(all_info());
                v.push(Back);
                v.push(Back);
                v.push(info(InfoKind::Visits));
                v
            },
        },
        Scenario {
            name: "info_keys_bankside",
            fixture: "bankside",
            world: bankside,
            start: "bankside",
            heading: Octant::South,
            actions: all_info(),
        },
    ]
}

pub fn navigator(s: &Scenario) -> (Navigator, Arc<ManualClock>) {
    let clock = Arc::new(ManualClock::new(EPOCH_MS));
    let n = Navigator::with_mock(
        Arc::new((s.world)()),
        NavConfig::default(),
        Position::new(s.start, s.heading),
        clock.clone(),
        Box::new(NullSink),
    )
    .unwrap();
    (n, clock)
}

pub fn run(s: &Scenario) -> String {
    let (mut n, clock) = navigator(s);
    let mut out = format!("# {} on {}, starting at {} facing {}\n", s.name, s.fixture, s.start, s.heading.name());
    for a in &s.actions {
        clock.advance(TICK_MS);
        out.push_str(&format!("> {}\n", serde_json::to_string(a).unwrap()));
        for m in n.handle(a) {
            out.push_str(&transcript_line(&m));
            out.push('\n');
        }
    }
    out
}

pub fn golden_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(rel)
}

/// Compares against a golden file; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(rel: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(rel);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected.lines().zip(actual.lines()).position(|(a, b)| a != b).unwrap_or(expected.lines().count().min(actual.lines().count()));
    Err(format!(
        "{} differs at line {}:\n  expected: {:?}\n  actual:   {:?}",
        path.display(),
        line + 1,
        expected.lines().nth(line),
        actual.lines().nth(line)
    ))
}
