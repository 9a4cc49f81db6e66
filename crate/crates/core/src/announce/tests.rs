use std::sync::Arc;

use super::*;
use crate::geo::{destination_point, GeoPoint, Heading};
use crate::nav::{build_egocentric_graph, detect_intersection_along, NavConfig};
use crate::session::{ManualClock, NullSink, PanDirection, Position, Session};
use crate::synth::{bankside_and_acropolis, crossroads, FixtureBuilder};
use crate::world::{CaptureDate, MapProvider, StreetAddress, World};

fn cfg() -> NavConfig {
    NavConfig::default()
}

fn ctx_of(w: &World, pano: &str, heading: Octant) -> LocalContext {
    build_local_context(w, w.pano(pano).unwrap(), heading, &cfg()).unwrap()
}

fn graph_of(w: &World, pano: &str) -> EgocentricGraph {
    build_egocentric_graph(w, w.pano(pano).unwrap(), &cfg()).unwrap()
}

fn origin() -> GeoPoint {
    GeoPoint::new(52.52, 13.405).unwrap()
}

/// One pano and one place at `bearing`/`distance` from it.
fn one_place(bearing: f64, distance: f64) -> World {
    let mut b = FixtureBuilder::new("one place", origin());
    b.pano("p", 0.0, 0.0, "Unter den Linden").place_at(
        "cafe",
        "Cafe Einstein",
        "cafe",
        destination_point(origin(), Heading::new(bearing).unwrap(), distance),
    );
    b.world()
}

fn pan_to(w: &World, pano: &str, to: Octant) -> StatusMessage {
    let pan = PanOutcome { direction: PanDirection::Right, from: to.turn(-1), to };
    pan_announcement(&pan, &graph_of(w, pano), &ctx_of(w, pano, to), &cfg())
}

#[test]
fn minimal_pan_message() {
    let mut b = FixtureBuilder::new("alone", origin());
    b.pano("p", 0.0, 0.0, "Unter den Linden");
    assert_eq!(pan_to(&b.world(), "p", Octant::North).text, "Now facing: North. You cannot move forward.");
}

#[test]
fn pan_names_the_road_ahead() {
    let w = crossroads(41.0).world();
    assert_eq!(pan_to(&w, "x", Octant::East).text, "Now facing: East. You can move forward to Oak Avenue.");
}

#[test]
fn facing_clause_cone_and_distance() {
    let w = one_place(10.0, 16.0);
    assert_eq!(
        pan_to(&w, "p", Octant::North).text,
        "Now facing: North. You cannot move forward. You are facing Cafe Einstein 16 meters away."
    );
    assert!(!pan_to(&one_place(50.0, 16.0), "p", Octant::North).has(FragmentKind::Places));
    assert!(!pan_to(&one_place(0.0, 36.0), "p", Octant::North).has(FragmentKind::Places));
    assert!(pan_to(&one_place(0.0, 35.0), "p", Octant::North).has(FragmentKind::Places));
}

#[test]
fn facing_places_are_a_subset_of_nearby() {
    for bearing in (0..360).step_by(15) {
        for d in [5.0, 20.0, 34.0, 40.0, 49.0] {
            let w = one_place(bearing as f64, d);
            let ctx = ctx_of(&w, "p", Octant::North);
            for f in ctx.facing(&cfg()) {
                assert!(ctx.nearby.iter().any(|n| n.place_id == f.place_id));
            }
        }
    }
}

fn addr(road: &str) -> StreetAddress {
    StreetAddress {
        street_number: None,
        road_name: road.into(),
        neighborhood: None,
        city: "Berlin".into(),
        state_province: None,
        country: "Germany".into(),
    }
}

fn place(id: &str, name: &str, offset: f64, distance: f64) -> NearbyPlace {
    let o = crate::geo::RelativeOffset::new(offset);
    NearbyPlace {
        place_id: id.into(),
        name: name.into(),
        place_type: "library".into(),
        editorial_summary: None,
        location: origin(),
        distance,
        bearing: Heading::new(o.degrees().rem_euclid(360.0)).unwrap(),
        offset: o.degrees(),
        position: o.position(),
    }
}

fn ctx(pano: &str, road: &str, nearby: Vec<NearbyPlace>) -> LocalContext {
    LocalContext {
        pano_id: pano.into(),
        location: origin(),
        address: addr(road),
        heading: Octant::North,
        at_intersection: None,
        nearby,
    }
}

fn step(d: f64) -> MoveOutcome {
    MoveOutcome {
        kind: MoveKind::Step(StepDirection::Forward),
        from: Position::new("a", Octant::North),
        to: Position::new("b", Octant::North),
        distance: d,
        intersection: None,
    }
}

fn first_visit() -> VisitSummary {
    VisitSummary { pano_id: "b".into(), count: 1, arrived_ms: 0, previous_visit_ms: None }
}

#[test]
fn unchanged_fields_are_not_repeated() {
    let a = ctx("a", "Main Street", vec![place("lib", "City Library", 5.0, 30.2)]);
    let b = ctx("b", "main street", vec![place("lib", "City Library", 8.0, 29.8)]);
    let m = movement_announcement(&a, &b, &step(9.0), &first_visit(), &cfg());
    assert_eq!(m.text, "You stepped forward 9 meters.");
}

#[test]
fn still_in_front_but_closer() {
    let a = ctx("a", "Main Street", vec![place("lib", "The Braille Library", 2.0, 45.0)]);
    let b = ctx("b", "Main Street", vec![place("lib", "The Braille Library", 3.0, 32.0)]);
    let m = movement_announcement(&a, &b, &step(13.0), &first_visit(), &cfg());
    assert_eq!(m.text, "You stepped forward 13 meters. The Braille Library is still in front of you but now 32 meters away.");
}

#[test]
fn new_place_on_the_left_and_road_change() {
    let a = ctx("a", "Main Street", vec![place("old", "Old Mill", 170.0, 48.0)]);
    let b = ctx("b", "Pike Street", vec![place("sb", "Starbucks Coffee", -90.0, 12.0)]);
    let revisit = VisitSummary { count: 2, ..first_visit() };
    let m = movement_announcement(&a, &b, &step(10.0), &revisit, &cfg());
    assert_eq!(
        m.text,
        "You stepped forward 10 meters. You are now on Pike Street. Starbucks Coffee is now on your left 12 meters away. \
         Old Mill is no longer within 50 meters. You have been here before."
    );
}

#[test]
fn intersection_arrival_and_departure() {
    let w = crossroads(41.0).world();
    let m3 = ctx_of(&w, "m3", Octant::North);
    let x = ctx_of(&w, "x", Octant::North);
    let out = MoveOutcome { to: Position::new("x", Octant::North), ..step(11.0) };
    let arrive = movement_announcement(&m3, &x, &out, &first_visit(), &cfg());
    assert!(arrive.text.contains("You are at the intersection of Main Street and Oak Avenue."), "{}", arrive.text);
    let leave = movement_announcement(&x, &m3, &out, &first_visit(), &cfg());
    assert!(leave.text.contains("You have left the intersection of Main Street and Oak Avenue."));
    let stay = movement_announcement(&x, &x, &out, &first_visit(), &cfg());
    assert!(!stay.has(FragmentKind::Intersection));
}

#[test]
fn bankside_teleport_message() {
    let w = Arc::new(bankside_and_acropolis().world());
    let map: Arc<dyn MapProvider> = w.clone();
    let mut s = Session::start(
        map,
        cfg(),
        Position::new("acropolis", Octant::North),
        Arc::new(ManualClock::new(0)),
        Box::new(NullSink),
    )
    .unwrap();
    s.teleport("Acropolis of Athens").unwrap();
    let t = s.teleport("38 Bankside").unwrap();
    let c = ctx_of(&w, "bankside", t.to.heading);
    let msg = teleport_announcement(&t, &c, &graph_of(&w, "bankside"), &cfg());
    assert_eq!(
        msg.text,
        "You teleported 2,391 km from Acropolis of Athens to 38 Bankside in London, England. \
         There are four places within 50 meters, including: a performing arts theater, Shakespeare's Globe, is ahead of you 26 meters away; \
         a historical landmark, Sam Wanamaker Plaque and an event venue, Ingresso, are to your left less than 47 meters away, \
         and a garden, Tate Community Garden, is to your right 49 meters away. \
         You are facing South and can move in four directions: East, South, West, and Northwest."
    );
}

#[test]
fn movements_after_a_blocked_step() {
    let mut b = FixtureBuilder::new("three exits", origin());
    b.pano("p", 0.0, 0.0, "Unter den Linden").pano("nw", -7.0, 7.0, "A").pano("w", -9.0, 0.0, "A").pano("se", 6.0, -6.0, "B");
    let w = b.world();
    let m = available_movements_announcement(&graph_of(&w, "p"), Octant::East, Some(StepDirection::Forward), &cfg());
    assert_eq!(
        m.text,
        "You cannot move forward along your current heading of East. You can move in three directions: Southeast, West, and Northwest."
    );
    let mut b = FixtureBuilder::new("none", origin());
    b.pano("p", 0.0, 0.0, "Unter den Linden");
    let m = available_movements_announcement(&graph_of(&b.world(), "p"), Octant::East, None, &cfg());
    assert_eq!(m.text, "You cannot move in any direction.");
}

#[test]
fn movement_list_is_clockwise_from_north() {
    // oracle: sort sampled bearings' octants by index
    let mut b = FixtureBuilder::new("star", origin());
    b.pano("p", 0.0, 0.0, "Hub");
    let bearings = [300.0, 10.0, 95.0, 225.0, 170.0];
    for (i, br) in bearings.iter().enumerate() {
        let h = Heading::new(*br).unwrap();
        b.pano_at(&format!("n{i}"), destination_point(origin(), h, 8.0), "Spoke");
    }
    let w = b.world();
    let mut want: Vec<Octant> = bearings.iter().map(|br| Heading::new(*br).unwrap().snap()).collect();
    want.sort_by_key(|o| o.index());
    let m = available_movements_announcement(&graph_of(&w, "p"), Octant::North, None, &cfg());
    assert!(m.text.ends_with(&format!("{}.", text::octant_list(&want))), "{}", m.text);
}

#[test]
fn nearby_none_and_single() {
    let c = ctx("a", "Main Street", vec![]);
    assert_eq!(nearby_places_announcement(&c, &cfg()).text, "There are no places within 50 meters.");
    let c = ctx("a", "Main Street", vec![place("lib", "City Library", 100.0, 20.0)]);
    assert_eq!(
        nearby_places_announcement(&c, &cfg()).text,
        "There is one place within 50 meters, including: a library, City Library, is to your right 20 meters away."
    );
}

#[test]
fn nearby_groups_follow_relative_buckets() {
    let offsets = [0.0, 44.9, 45.0, 134.9, 135.0, 180.0, -135.0, -45.0, -44.9];
    let places: Vec<NearbyPlace> = offsets.iter().enumerate().map(|(i, o)| place(&format!("p{i}"), &format!("P{i}"), *o, 10.0 + i as f64)).collect();
    let mut sorted = places.clone();
    sort_by_priority(&mut sorted);
    let order: Vec<RelativePosition> = sorted.iter().map(|p| p.position).collect();
    assert!(order.windows(2).all(|w| w[0].priority() <= w[1].priority()));
    let text = nearby_places_announcement(&ctx("a", "M", sorted), &cfg()).text;
    let front = text.find("ahead of you").unwrap();
    let left = text.find("to your left").unwrap();
    let right = text.find("to your right").unwrap();
    let behind = text.find("behind you").unwrap();
    assert!(front < left && left < right && right < behind);
}

#[test]
fn intersection_key() {
    let w = crossroads(41.0).world();
    let c = ctx_of(&w, "x", Octant::North);
    let next = detect_intersection_along(&w, c.location, Heading::NORTH, &cfg()).unwrap();
    let m = intersection_announcement(&c, next.as_ref(), &cfg());
    assert_eq!(m.text, "You are at the intersection of Main Street and Oak Avenue. No intersection within 70 meters ahead.");

    let c = ctx_of(&w, "m0", Octant::North);
    let next = detect_intersection_along(&w, c.location, Heading::NORTH, &cfg()).unwrap();
    let m = intersection_announcement(&c, next.as_ref(), &cfg());
    assert_eq!(m.text, "The next intersection is Main Street and Oak Avenue, 41 meters ahead.");
}

#[test]
fn photo_metadata() {
    let w = bankside_and_acropolis().world();
    assert_eq!(
        pano_metadata_announcement(w.pano("bankside").unwrap()).text,
        "This Street View image was taken on February 2025 by Google."
    );
    assert_eq!(
        pano_metadata_announcement(w.pano("acropolis").unwrap()).text,
        "This Street View image was taken on September 2023 by an unknown photographer."
    );
    let months = [
        "January", "February", "March", "April", "May", "June", "July", "August", "September", "October", "November", "December",
    ];
    let mut p = w.pano("bankside").unwrap().clone();
    for (i, name) in months.iter().enumerate() {
        p.capture_date = CaptureDate::new(2020, i as u8 + 1).unwrap();
        assert_eq!(pano_metadata_announcement(&p).text, format!("This Street View image was taken on {name} 2020 by Google."));
    }
}

#[test]
fn where_and_visits() {
    let w = bankside_and_acropolis().world();
    let c = ctx_of(&w, "bankside", Octant::South);
    assert_eq!(where_announcement(&c).text, "You are at 38 Bankside, London, England, facing South.");
    assert_eq!(visits_announcement(&first_visit(), 0).text, "This is your first visit here.");
    let v = VisitSummary { pano_id: "b".into(), count: 3, arrived_ms: 200_000, previous_visit_ms: Some(20_000) };
    assert_eq!(visits_announcement(&v, 200_000).text, "You have been here three times. Your last visit was 3 minutes ago.");
}

#[test]
fn compass_mode_for_places() {
    let c = NavConfig { relative_places: false, ..cfg() };
    let a = ctx("a", "Main Street", vec![]);
    let b = ctx("b", "Main Street", vec![place("sb", "Starbucks Coffee", -90.0, 12.0)]);
    let m = movement_announcement(&a, &b, &step(10.0), &first_visit(), &c);
    assert!(m.text.contains("Starbucks Coffee is now to the west 12 meters away."), "{}", m.text);
}

#[test]
fn text_is_the_fragments_joined() {
    let a = ctx("a", "Main Street", vec![place("old", "Old Mill", 170.0, 48.0)]);
    let b = ctx("b", "Pike Street", vec![place("sb", "Starbucks Coffee", -90.0, 12.0)]);
    let m = movement_announcement(&a, &b, &step(10.0), &first_visit(), &cfg());
    let joined: Vec<&str> = m.fragments.iter().map(|f| f.text.as_str()).collect();
    assert_eq!(m.text, joined.join(" "));
    assert_eq!(m.channel, Channel::Status);
}
