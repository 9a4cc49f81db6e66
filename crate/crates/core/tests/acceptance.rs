//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srai_core::ai::ChatCommand;
use srai_core::announce::{build_local_context, movement_announcement, Channel, LocalContext};
use srai_core::engine::{Action, InputSource, Navigator};
use srai_core::geo::{destination_point, GeoPoint, Heading, Octant};
use srai_core::nav::{build_egocentric_graph, detect_intersection_along, jump_target, link_movements, NavConfig, NavError};
use srai_core::session::{
    ManualClock, NullSink, PanDirection, Position, Session, SessionError, SessionState, StepDirection,
};
use srai_core::synth::{bankside_and_acropolis, crossroads, four_way, poi_scenes, FourWayLinks, FixtureBuilder, GridCity, POI_TAGS};
use srai_core::world::{MapProvider, World};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let verdict = match result {
        Ok(Ok(detail)) => match limit {
            Some(l) if elapsed > l => Err(format!("{detail}; took {elapsed:.2?}, limit {l:?}")),
            _ => Ok(detail),
        },
        Ok(Err(e)) => Err(e),
        Err(p) => Err(format!(
            "panicked: {}",
            p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        )),
    };
    match verdict {
        Ok(detail) => {
            println!("AC{id} PASS {title}: {detail} [{elapsed:.2?}]");
            true
        }
        Err(e) => {
            println!("AC{id} FAIL {title}: {e} [{elapsed:.2?}]");
            false
        }
    }
}

fn origin() -> GeoPoint {
    GeoPoint::new(47.6062, -122.3321).unwrap()
}

/// Signed angle from `h` to `b`, in (-180, 180].
fn wrap(b: f64, h: f64) -> f64 {
    let mut d = (b - h) % 360.0;
    if d <= -180.0 {
        d += 360.0;
    }
    if d > 180.0 {
        d -= 360.0;
    }
    d
}

fn tenths(from: i32, to: i32) -> impl Iterator<Item = f64> {
    (from..=to).map(|t| t as f64 / 10.0)
}

// AC1

fn ac1() -> Outcome {
    let cfg = NavConfig::default();
    let want: Vec<Octant> = vec![Octant::North, Octant::East, Octant::South, Octant::West];
    let mut counts = Vec::new();
    for (links, expected) in [(FourWayLinks::FullyLinked, 4), (FourWayLinks::EastWestOnly, 2), (FourWayLinks::TwoLinks, 2)] {
        let world = four_way(links).world();
        let c = world.pano("c").unwrap();
        let graph = build_egocentric_graph(&world, c, &cfg).map_err(|e| e.to_string())?;
        let moves = graph.available_movements(&cfg);
        ensure(moves == want, || format!("{links:?}: movements {moves:?}"))?;
        let linked = link_movements(c, &cfg).len();
        ensure(linked == expected, || format!("{links:?}: {linked} link-only moves, expected {expected}"))?;
        counts.push(linked);
    }
    Ok(format!("custom graph N/E/S/W in all three; link-only {counts:?}"))
}

// AC2

fn sweep_facing_and_nearby(cfg: &NavConfig) -> Result<usize, String> {
    let mut b = FixtureBuilder::new("facing sweep", origin());
    b.pano("o", 0.0, 0.0, "Sweep Road");
    let o = b.origin();
    let mut expect_facing = BTreeSet::new();
    let mut expect_nearby = BTreeSet::new();
    let mut n = 0;
    // facing: distances 33..37 m and offsets ±(43..47)° at 0.1 resolution
    for d in tenths(330, 370) {
        for a in tenths(430, 470).flat_map(|a| [a, -a]) {
            let id = format!("f{n}");
            n += 1;
            b.place_at(&id, &id, "cafe", destination_point(o, Heading::new(a.rem_euclid(360.0)).unwrap(), d));
            expect_nearby.insert(id.clone());
            if d <= 35.0 && a.abs() <= 45.0 {
                expect_facing.insert(id);
            }
        }
    }
    // nearby radius: 45..55 m at 0.1 resolution, spread around the compass
    for (i, d) in tenths(450, 550).enumerate() {
        let id = format!("r{i}");
        let bearing = (i as f64 * 37.3).rem_euclid(360.0);
        b.place_at(&id, &id, "park", destination_point(o, Heading::new(bearing).unwrap(), d));
        if d <= 50.0 {
            expect_nearby.insert(id);
        }
    }
    let world = b.world();
    let pano = world.pano("o").unwrap();
    let ctx = build_local_context(&world, pano, Octant::North, cfg).map_err(|e| e.to_string())?;
    let nearby: BTreeSet<String> = ctx.nearby.iter().map(|p| p.place_id.clone()).collect();
    ensure(nearby == expect_nearby, || {
        format!("nearby mismatch: extra {:?}, missing {:?}", nearby.difference(&expect_nearby).take(5).collect::<Vec<_>>(), expect_nearby.difference(&nearby).take(5).collect::<Vec<_>>())
    })?;
    let facing: BTreeSet<String> = ctx.facing(cfg).iter().map(|p| p.place_id.clone()).collect();
    ensure(facing == expect_facing, || {
        format!("facing mismatch: extra {:?}, missing {:?}", facing.difference(&expect_facing).take(5).collect::<Vec<_>>(), expect_facing.difference(&facing).take(5).collect::<Vec<_>>())
    })?;
    Ok(n + 101)
}

fn sweep_forward_tolerance(cfg: &NavConfig) -> Result<usize, String> {
    let mut checks = 0;
    for t in 0..3600 {
        let bearing = t as f64 / 10.0;
        let mut b = FixtureBuilder::new("tolerance sweep", origin());
        b.pano("o", 0.0, 0.0, "Sweep Road");
        b.pano_at("t", destination_point(b.origin(), Heading::new(bearing).unwrap(), 10.0), "Sweep Road");
        b.link("o", "t");
        let world = b.world();
        let graph = build_egocentric_graph(&world, world.pano("o").unwrap(), cfg).map_err(|e| e.to_string())?;
        for h in Octant::ALL {
            let hd = h.degrees();
            let fwd = graph.next_pano(h.heading(), cfg).is_some();
            let back = graph.prev_pano(h.heading(), cfg).is_some();
            ensure(fwd == (wrap(bearing, hd).abs() <= 22.5), || format!("forward: bearing {bearing}, heading {hd}"))?;
            ensure(back == (wrap(bearing, hd + 180.0).abs() <= 22.5), || format!("backward: bearing {bearing}, heading {hd}"))?;
            checks += 2;
        }
    }
    Ok(checks)
}

fn sweep_jump_cap(cfg: &NavConfig) -> Result<usize, String> {
    let mut checks = 0;
    for d in tenths(650, 750) {
        let mut b = FixtureBuilder::new("jump sweep", origin());
        b.road("Long Road", &[(0.0, -10.0), (0.0, 100.0)]);
        b.pano("o", 0.0, 0.0, "Long Road").pano("t", 0.0, d, "Long Road");
        let world = b.world();
        let got = jump_target(&world, world.pano("o").unwrap(), Heading::NORTH, cfg);
        match (&got, d <= 70.0) {
            (Ok(t), true) if t.pano_id == "t" => {}
            (Err(NavError::NoMovement), false) => {}
            _ => return Err(format!("jump at {d} m: {got:?}")),
        }
        checks += 1;
    }
    Ok(checks)
}

fn sweep_ray_step(cfg: &NavConfig) -> Result<usize, String> {
    let mut checks = 0;
    for c in tenths(200, 900) {
        let world = crossroads(c).world();
        let start = world.pano("m0").unwrap();
        let hit = detect_intersection_along(&world, start.location, Heading::NORTH, cfg).map_err(|e| e.to_string())?;
        // brute force: first sample k·15 m (k ≥ 1, ≤ 70 m) whose ±10 m square
        // reaches the cross road at north = c
        let expected = (1..).map(|k| k as f64 * 15.0).take_while(|s| *s <= 70.0).position(|s| (c - s).abs() <= 10.0);
        match (&hit, expected) {
            (None, None) => {}
            (Some(h), Some(i)) => {
                ensure(h.sample_index as usize == i + 1, || format!("crossing at {c}: sample {} vs {}", h.sample_index, i + 1))?;
                ensure((h.distance_from_origin - 15.0 * (i + 1) as f64).abs() < 1e-9, || format!("crossing at {c}: distance {}", h.distance_from_origin))?;
                ensure(h.pano_id == "x", || format!("crossing at {c}: hit {}", h.pano_id))?;
            }
            _ => return Err(format!("crossing at {c}: got {:?}, expected sample {:?}", hit.map(|h| h.sample_index), expected.map(|i| i + 1))),
        }
        checks += 1;
    }
    Ok(checks)
}

fn ac2() -> Outcome {
    let cfg = NavConfig::default();
    let a = sweep_facing_and_nearby(&cfg)?;
    let b = sweep_forward_tolerance(&cfg)?;
    let c = sweep_jump_cap(&cfg)?;
    let d = sweep_ray_step(&cfg)?;
    Ok(format!("facing/nearby {a} places, tolerance {b} checks, jump cap {c} cases, ray step {d} crossings; all equal to brute force"))
}

// AC3

fn haversine_oracle(a: GeoPoint, b: GeoPoint) -> f64 {
    let r = 6_371_008.8_f64;
    let (p1, p2) = (a.lat().to_radians(), b.lat().to_radians());
    let dp = p2 - p1;
    let dl = (b.lng() - a.lng()).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * r * h.sqrt().asin()
}

fn ac3() -> Outcome {
    let world = Arc::new(bankside_and_acropolis().world());
    let clock = Arc::new(ManualClock::new(support::EPOCH_MS));
    let mut nav = Navigator::with_mock(world.clone(), NavConfig::default(), Position::new("acropolis", Octant::North), clock, Box::new(NullSink))
        .map_err(|e| e.to_string())?;
    nav.handle(&Action::Teleport { query: "Acropolis of Athens".into() });
    let msgs = nav.handle(&Action::Teleport { query: "38 Bankside".into() });
    let text = msgs.first().map(|m| m.text.clone()).unwrap_or_default();
    let from = world.pano("acropolis").unwrap().location;
    let to = world.place("addr-38").unwrap().location;
    let oracle = haversine_oracle(from, to);
    let reference = 2_393_000.0;
    let rel = (oracle - reference).abs() / reference;
    ensure(rel < 0.01, || format!("oracle distance {oracle:.0} m is {:.2}% from 2,393 km", rel * 100.0))?;
    let teleport = nav.session().events().iter().rev().find_map(|e| match &e.body {
        srai_core::session::EventBody::Teleport(t) => Some(t.distance),
        _ => None,
    });
    let logged = teleport.ok_or("no teleport event")?;
    ensure((logged - oracle).abs() < 1.0, || format!("engine distance {logged:.1} vs oracle {oracle:.1}"))?;
    support::check_golden("teleport_bankside.txt", &format!("{text}\n"))?;
    Ok(format!("{:.1} km ({:+.2}% vs 2,393 km), message matches golden", oracle / 1000.0, (oracle - reference) / reference * 100.0))
}

// AC4

#[derive(Debug, Clone, Copy)]
enum Op {
    Pan(PanDirection),
    Step(StepDirection),
    Jump,
    Back,
    Teleport(usize, usize),
}

fn random_op(rng: &mut ChaCha8Rng, city: &GridCity) -> Op {
    match rng.gen_range(0..100) {
        0..=19 => Op::Pan(PanDirection::Left),
        20..=39 => Op::Pan(PanDirection::Right),
        40..=64 => Op::Step(StepDirection::Forward),
        65..=74 => Op::Step(StepDirection::Backward),
        75..=86 => Op::Jump,
        87..=96 => Op::Back,
        _ => Op::Teleport(rng.gen_range(0..city.avenues - 1), rng.gen_range(0..city.streets - 1)),
    }
}

fn random_start(rng: &mut ChaCha8Rng, world: &World) -> Position {
    let panos = world.panos();
    let p = &panos[rng.gen_range(0..panos.len())];
    Position::new(&p.id, Octant::from_index(rng.gen_range(0..8)))
}

fn apply(session: &mut Session, op: Op) -> Result<(), SessionError> {
    match op {
        Op::Pan(d) => {
            session.pan(d);
            Ok(())
        }
        Op::Step(d) => session.step(d).map(|_| ()),
        Op::Jump => session.jump().map(|_| ()),
        Op::Back => session.go_back().map(|_| ()),
        Op::Teleport(i, j) => session.teleport(&format!("Block {} {}", i + 1, j + 1)).map(|_| ()),
    }
}

fn ac4(world: &Arc<World>, city: &GridCity) -> Outcome {
    let cfg = NavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let map: Arc<dyn MapProvider> = world.clone();
    let (mut actions, mut identities) = (0usize, 0usize);
    for seq in 0..10_000 {
        let clock = Arc::new(ManualClock::new(support::EPOCH_MS));
        let start = random_start(&mut rng, world);
        let mut s = Session::start(map.clone(), cfg.clone(), start, clock.clone(), Box::new(NullSink)).map_err(|e| e.to_string())?;
        let len = rng.gen_range(1..=12);
        for _ in 0..len {
            let op = random_op(&mut rng, city);
            clock.advance(rng.gen_range(0..5_000));
            let before = s.state().position();
            let result = apply(&mut s, op);
            actions += 1;
            match result {
                Ok(()) | Err(SessionError::NoMove(_)) | Err(SessionError::NothingToUndo) => {}
                Err(e) => return Err(format!("sequence {seq}: {op:?} failed: {e}")),
            }
            let pos = s.state().position();
            ensure(Octant::ALL.contains(&pos.heading) && pos.heading.degrees() % 45.0 == 0.0, || format!("sequence {seq}: heading {:?}", pos.heading))?;
            ensure(world.pano(&pos.pano_id).is_some(), || format!("sequence {seq}: invalid pano {}", pos.pano_id))?;
            if matches!(op, Op::Step(StepDirection::Forward)) && result.is_ok() {
                let back = s.graph().map_err(|e| e.to_string())?;
                let prev = back.prev_pano(pos.heading.heading(), &cfg).map(|n| n.pano_id.clone());
                ensure(prev.as_deref() == Some(before.pano_id.as_str()), || {
                    format!("sequence {seq}: forward from {} to {} but backward leads to {prev:?}", before.pano_id, pos.pano_id)
                })?;
                identities += 1;
            }
        }
        let replayed = SessionState::replay(s.events(), cfg.undo_depth).map_err(|e| format!("sequence {seq}: {e:?}"))?;
        ensure(&replayed == s.state(), || format!("sequence {seq}: replay differs"))?;
    }
    Ok(format!("10000 sequences, {actions} actions, {identities} forward/backward identities, every replay exact"))
}

// AC5

fn hotkeys_for(cmd: ChatCommand) -> Vec<Action> {
    use Action::*;
    match cmd {
        ChatCommand::TurnLeft45 => vec![PanLeft],
        ChatCommand::TurnLeft90 => vec![PanLeft, PanLeft],
        ChatCommand::TurnRight45 => vec![PanRight],
        ChatCommand::TurnRight90 => vec![PanRight, PanRight],
        ChatCommand::TurnAround => vec![PanRight, PanRight, PanRight, PanRight],
        ChatCommand::MoveForward => vec![StepForward],
        ChatCommand::MoveBackward => vec![StepBackward],
        ChatCommand::MoveToIntersection => vec![Jump],
    }
}

fn ac5(world: &Arc<World>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut compared = 0;
    for cmd in ChatCommand::ALL {
        for trial in 0..200 {
            let start = random_start(&mut rng, world);
            let warmup: Vec<Action> = (0..rng.gen_range(0..4))
                .map(|_| match rng.gen_range(0..4) {
                    0 => Action::PanLeft,
                    1 => Action::PanRight,
                    2 => Action::StepForward,
                    _ => Action::Jump,
                })
                .collect();
            let make = || {
                let clock = Arc::new(ManualClock::new(support::EPOCH_MS));
                let mut n = Navigator::with_mock(world.clone(), NavConfig::default(), start.clone(), clock, Box::new(NullSink)).unwrap();
                for a in &warmup {
                    n.handle(a);
                }
                n
            };
            let (mut a, mut b) = (make(), make());
            let via_chat: Vec<_> = a.dispatch_command(cmd).into_iter().filter(|m| m.channel == Channel::Status).collect();
            let via_keys: Vec<_> = hotkeys_for(cmd).iter().flat_map(|k| b.handle(k)).collect();
            let n = via_chat.len().min(via_keys.len());
            ensure(a.session().state() == b.session().state(), || format!("{} trial {trial}: states differ", cmd.name()))?;
            ensure(a.session().events() == b.session().events(), || format!("{} trial {trial}: logs differ", cmd.name()))?;
            // a blocked move stops the command after the failing hotkey
            ensure(via_chat[..] == via_keys[..n] && n == via_chat.len(), || format!("{} trial {trial}: announcements differ", cmd.name()))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} command/state pairs, identical state, log and announcements"))
}

// AC6

fn phrase(offset: f64) -> &'static str {
    match offset.round() as i32 {
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

fn plural(tag: &str) -> String {
    if tag.ends_with('h') || tag.ends_with('x') || tag.ends_with('s') {
        format!("{tag}es")
    } else {
        format!("{tag}s")
    }
}

/// Expected direction of `tag` among the views seen so far, if any.
fn truth(world: &World, pano: &str, seen: &[Octant], heading: Octant, tag: &str) -> Option<&'static str> {
    let mut best: Option<f64> = None;
    for o in seen {
        let tags = &world.view(pano, *o).unwrap().annotations;
        if !tags.iter().any(|t| t == tag) {
            continue;
        }
        let off = wrap(o.degrees(), heading.degrees());
        best = match best {
            Some(b) if b.abs() < off.abs() || (b.abs() == off.abs() && b > off) => Some(b),
            _ => Some(off),
        };
    }
    best.map(phrase)
}

fn ask(nav: &mut Navigator, q: &str) -> String {
    let out = nav.handle(&Action::ChatTurn { input: q.into(), source: InputSource::Typed });
    assert_eq!(out.len(), 1, "{q}: {out:?}");
    out[0].text.clone()
}

fn check_answers(nav: &mut Navigator, world: &World, seen: &[Octant], stats: &mut (usize, usize)) -> Result<(), String> {
    let pos = nav.session().state().position();
    for tag in POI_TAGS {
        let want = truth(world, &pos.pano_id, seen, pos.heading, tag);
        for q in [format!("Is there a {tag}?"), format!("Are there any {}?", plural(tag))] {
            let a = ask(nav, &q);
            let ok = match want {
                Some(p) => a.starts_with("Yes, there is") && a.ends_with(&format!("{tag} {p}.")),
                None => a.starts_with("No, I don't see"),
            };
            ensure(ok, || format!("{} facing {:?}, {q:?} -> {a:?}, truth {want:?}", pos.pano_id, pos.heading))?;
            stats.0 += 1;
        }
        let a = ask(nav, &format!("Where is the {tag}?"));
        let ok = match want {
            Some(p) => a == format!("The {tag} is {p}."),
            None => a.starts_with("I don't see"),
        };
        ensure(ok, || format!("{} facing {:?}, where is {tag} -> {a:?}, truth {want:?}", pos.pano_id, pos.heading))?;
        stats.1 += 1;
    }
    Ok(())
}

fn ac6() -> Outcome {
    let world = Arc::new(poi_scenes().world());
    let mut stats = (0, 0);
    let ids: Vec<String> = world.panos().iter().map(|p| p.id.clone()).collect();
    for id in &ids {
        for start in Octant::ALL {
            let clock = Arc::new(ManualClock::new(support::EPOCH_MS));
            let mut nav = Navigator::with_mock(world.clone(), NavConfig::default(), Position::new(id, start), clock, Box::new(NullSink))
                .map_err(|e| e.to_string())?;
            nav.handle(&Action::ChatOpen);
            let mut seen = vec![start];
            check_answers(&mut nav, &world, &seen, &mut stats)?;
            for _ in 0..7 {
                nav.handle(&Action::PanRight);
                seen.push(nav.session().state().heading);
                check_answers(&mut nav, &world, &seen, &mut stats)?;
            }
            let before = nav.session().state().current_pano_id.clone();
            nav.handle(&Action::StepForward);
            let after = nav.session().state().position();
            if after.pano_id != before {
                check_answers(&mut nav, &world, &[after.heading], &mut stats)?;
            }
        }
    }
    Ok(format!("{} existence and {} location answers, 100% consistent with annotations", stats.0, stats.1))
}

// AC7

fn key(name: &str) -> String {
    name.to_lowercase()
}

fn diff_sound(prev: &LocalContext, new: &LocalContext, texts: &[(String, String)]) -> Result<(), String> {
    let road_changed = key(&prev.address.road_name) != key(&new.address.road_name);
    let says_road = texts.iter().any(|(t, _)| t == "move.road");
    ensure(road_changed == says_road, || format!("road changed {road_changed}, announced {says_road}"))?;
    let roads = |c: &LocalContext| c.at_intersection.as_ref().map(|h| h.road_names.iter().map(|r| key(r)).collect::<Vec<_>>());
    let inter_changed = roads(prev) != roads(new);
    let says_inter = texts.iter().any(|(t, _)| t.starts_with("move.") && t.ends_with("_intersection"));
    ensure(inter_changed == says_inter, || format!("intersection changed {inter_changed}, announced {says_inter}"))?;
    for p in &new.nearby {
        let Some(q) = prev.nearby.iter().find(|q| q.place_id == p.place_id) else { continue };
        let unchanged = q.position == p.position && q.distance.round() == p.distance.round();
        let mentioned = texts.iter().any(|(t, x)| t.starts_with("place.") && x.starts_with(&format!("{} is ", p.name)));
        ensure(!(unchanged && mentioned), || format!("{} re-announced without change", p.name))?;
        ensure(unchanged || mentioned, || format!("{} changed but was not announced", p.name))?;
    }
    for q in &prev.nearby {
        if !new.nearby.iter().any(|p| p.place_id == q.place_id) {
            let mentioned = texts.iter().any(|(t, x)| t == "place.gone" && x.starts_with(&format!("{} is ", q.name)));
            ensure(mentioned, || format!("{} left without notice", q.name))?;
        }
    }
    for p in &new.nearby {
        if !prev.nearby.iter().any(|q| q.place_id == p.place_id) {
            ensure(texts.iter().any(|(t, x)| t == "place.now" && x.starts_with(&format!("{} is ", p.name))), || format!("{} arrived without notice", p.name))?;
        }
    }
    Ok(())
}

fn ac7(world: &Arc<World>) -> Outcome {
    let cfg = NavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let map: Arc<dyn MapProvider> = world.clone();
    let mut trials = 0;
    let mut fragments = 0;
    while trials < 1000 {
        let clock = Arc::new(ManualClock::new(support::EPOCH_MS));
        let mut s = Session::start(map.clone(), cfg.clone(), random_start(&mut rng, world), clock, Box::new(NullSink)).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let ctx = |s: &Session| build_local_context(world.as_ref(), &s.current_pano().unwrap(), s.state().heading, &cfg).unwrap();
            let prev = ctx(&s);
            let outcome = match rng.gen_range(0..10) {
                0..=1 => {
                    s.pan(if rng.gen_bool(0.5) { PanDirection::Left } else { PanDirection::Right });
                    continue;
                }
                2..=6 => s.step(StepDirection::Forward),
                7 => s.step(StepDirection::Backward),
                8 => s.jump(),
                _ => s.go_back(),
            };
            let Ok(outcome) = outcome else { continue };
            let new = ctx(&s);
            let msg = movement_announcement(&prev, &new, &outcome, &s.visit_info(), &cfg);
            let texts: Vec<(String, String)> = msg.fragments.iter().map(|f| (f.template.clone(), f.text.clone())).collect();
            fragments += texts.len();
            diff_sound(&prev, &new, &texts).map_err(|e| format!("trial {trial}: {e}; message {:?}", msg.text, trial = trials))?;
            trials += 1;
        }
    }
    let mut goldens = 0;
    for s in support::scenarios() {
        let first = support::run(&s);
        ensure(first == support::run(&s), || format!("{} transcript is not stable", s.name))?;
        support::check_golden(&format!("transcripts/{}.txt", s.name), &first)?;
        goldens += 1;
    }
    Ok(format!("{trials} movement pairs ({fragments} fragments) sound; {goldens} golden transcripts byte-stable"))
}

// AC8

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn ac8() -> Outcome {
    let city = GridCity { avenues: 46, streets: 46, ..GridCity::default() };
    let world = city.build().world();
    let cfg = NavConfig::default();
    let panos = world.panos();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut graph_times = Vec::new();
    let mut jump_times = Vec::new();
    for _ in 0..501 {
        let p = &panos[rng.gen_range(0..panos.len())];
        let t = Instant::now();
        let g = build_egocentric_graph(&world, p, &cfg).map_err(|e| e.to_string())?;
        graph_times.push(t.elapsed());
        std::hint::black_box(g);
        let h = Octant::from_index(rng.gen_range(0..8)).heading();
        let t = Instant::now();
        let j = jump_target(&world, p, h, &cfg);
        jump_times.push(t.elapsed());
        std::hint::black_box(j.ok());
    }
    let (g, j) = (median(graph_times), median(jump_times));
    ensure(g < Duration::from_millis(5), || format!("graph median {g:.2?}"))?;
    ensure(j < Duration::from_millis(20), || format!("jump median {j:.2?}"))?;
    Ok(format!("{} panos; graph median {g:.2?} (<5 ms), jump median {j:.2?} (<20 ms)", panos.len()))
}

fn main() {
    let t = Instant::now();
    let city = GridCity::default();
    let world = Arc::new(city.build().world());
    println!("built {}x{} grid city with {} panos in {:.2?}", city.avenues, city.streets, world.panos().len(), t.elapsed());

    let results = [
        criterion(1, "four-way graph repair", Some(Duration::from_secs(1)), ac1),
        criterion(2, "threshold conformance sweep", Some(Duration::from_secs(10)), ac2),
        criterion(3, "teleport distance and message", Some(Duration::from_secs(1)), ac3),
        criterion(4, "state-machine determinism", Some(Duration::from_secs(30)), || ac4(&world, &city)),
        criterion(5, "chat command bisimulation", Some(Duration::from_secs(10)), || ac5(&world)),
        criterion(6, "mock assistant truthfulness", Some(Duration::from_secs(5)), ac6),
        criterion(7, "announcer diff soundness and goldens", None, || ac7(&world)),
        criterion(8, "graph and jump performance", None, ac8),
    ];
    let failed = results.iter().filter(|r| !**r).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
