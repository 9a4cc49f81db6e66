//! Everything the status voice says.
//!
//! Composers are pure functions over snapshots. Each message is a list of
//! typed fragments so tests (and the UI) can tell which facts a message
//! mentions without parsing text.

pub mod catalog;
mod context;
pub mod text;

use serde::{Deserialize, Serialize};

use crate::geo::{Octant, RelativePosition};
use crate::nav::{EgocentricGraph, IntersectionHit, JumpKind, NavConfig};
use crate::session::{MoveKind, MoveOutcome, PanOutcome, StepDirection, TeleportOutcome, VisitSummary};
use crate::world::{same_road_name, Panorama};

pub use catalog::{render, CATALOG};
pub use context::{build_local_context, sort_by_priority, LocalContext, NearbyPlace};
use text::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    Status,
    Chat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FragmentKind {
    Heading,
    Movement,
    Address,
    Intersection,
    Places,
    Visit,
    Teleport,
    Info,
    Error,
    Chat,
    Signal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    pub kind: FragmentKind,
    pub template: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusMessage {
    /// The fragments' text joined by single spaces.
    pub text: String,
    pub channel: Channel,
    pub fragments: Vec<Fragment>,
}

impl StatusMessage {
    pub fn new(channel: Channel, fragments: Vec<Fragment>) -> StatusMessage {
        let text = fragments.iter().map(|f| f.text.as_str()).filter(|t| !t.is_empty()).collect::<Vec<_>>().join(" ");
        StatusMessage { text, channel, fragments }
    }

    pub fn status(fragments: Vec<Fragment>) -> StatusMessage {
        StatusMessage::new(Channel::Status, fragments)
    }

    /// A single catalog sentence on the status channel.
    pub fn single(kind: FragmentKind, id: &str, args: &[(&str, &str)]) -> StatusMessage {
        StatusMessage::status(vec![frag(kind, id, args)])
    }

    /// Free text from the model, voiced on the chat channel.
    pub fn chat(text: &str) -> StatusMessage {
        StatusMessage::new(
            Channel::Chat,
            vec![Fragment { kind: FragmentKind::Chat, template: "chat.reply".into(), text: text.to_string() }],
        )
    }

    pub fn has(&self, kind: FragmentKind) -> bool {
        self.fragments.iter().any(|f| f.kind == kind)
    }
}

pub fn frag(kind: FragmentKind, id: &str, args: &[(&str, &str)]) -> Fragment {
    Fragment { kind, template: id.to_string(), text: render(id, args) }
}

fn position_words(p: &NearbyPlace, cfg: &NavConfig) -> String {
    if cfg.relative_places {
        position_phrase(p.position).to_string()
    } else {
        compass_phrase(p.compass())
    }
}

/// Heading, whether forward movement is possible, and what the user now faces.
pub fn pan_announcement(pan: &PanOutcome, graph: &EgocentricGraph, ctx: &LocalContext, cfg: &NavConfig) -> StatusMessage {
    let mut out = vec![frag(FragmentKind::Heading, "pan.facing", &[("compass", pan.to.name())])];
    match graph.next_pano(pan.to.heading(), cfg) {
        Some(n) => out.push(frag(FragmentKind::Movement, "pan.forward", &[("road", &n.road_name)])),
        None => out.push(frag(FragmentKind::Movement, "pan.no_forward", &[])),
    }
    let facing: Vec<String> = ctx
        .facing(cfg)
        .iter()
        .map(|p| render("place.facing_item", &[("name", &p.name), ("distance", &format_distance(p.distance))]))
        .collect();
    if !facing.is_empty() {
        out.push(frag(FragmentKind::Places, "pan.facing_places", &[("places", &join_list(&facing))]));
    }
    StatusMessage::status(out)
}

fn movement_line(outcome: &MoveOutcome) -> Fragment {
    let d = format_distance(outcome.distance);
    match outcome.kind {
        MoveKind::Step(dir) => frag(FragmentKind::Movement, "move.step", &[("direction", dir.word()), ("distance", &d)]),
        MoveKind::Jump(JumpKind::ToIntersection) => frag(FragmentKind::Movement, "move.jump_intersection", &[("distance", &d)]),
        MoveKind::Jump(JumpKind::MaxDistance) => frag(FragmentKind::Movement, "move.jump", &[("distance", &d)]),
        MoveKind::GoBack => frag(FragmentKind::Movement, "move.back", &[("distance", &d)]),
    }
}

fn same_roads(a: &IntersectionHit, b: &IntersectionHit) -> bool {
    a.road_names.len() == b.road_names.len() && a.road_names.iter().zip(&b.road_names).all(|(x, y)| same_road_name(x, y))
}

/// Fragments for nearby places that changed between two contexts.
pub fn place_changes(prev: &LocalContext, new: &LocalContext, cfg: &NavConfig) -> Vec<Fragment> {
    let mut out = Vec::new();
    for p in &new.nearby {
        let dist = format_distance(p.distance);
        let pos = position_words(p, cfg);
        match prev.nearby.iter().find(|q| q.place_id == p.place_id) {
            None => out.push(frag(FragmentKind::Places, "place.now", &[("name", &p.name), ("position", &pos), ("distance", &dist)])),
            Some(q) => {
                let same_side = position_words(q, cfg) == pos;
                let same_distance = rounded_meters(q.distance) == rounded_meters(p.distance);
                if !same_side {
                    out.push(frag(FragmentKind::Places, "place.now", &[("name", &p.name), ("position", &pos), ("distance", &dist)]));
                } else if !same_distance {
                    out.push(frag(FragmentKind::Places, "place.still", &[("name", &p.name), ("position", &pos), ("distance", &dist)]));
                }
            }
        }
    }
    let radius = format_distance(cfg.nearby_radius);
    for q in &prev.nearby {
        if !new.nearby.iter().any(|p| p.place_id == q.place_id) {
            out.push(frag(FragmentKind::Places, "place.gone", &[("name", &q.name), ("radius", &radius)]));
        }
    }
    out
}

/// Movement type and distance, then only what changed since `prev`.
pub fn movement_announcement(
    prev: &LocalContext,
    new: &LocalContext,
    outcome: &MoveOutcome,
    visit: &VisitSummary,
    cfg: &NavConfig,
) -> StatusMessage {
    let mut out = vec![movement_line(outcome)];
    if !same_road_name(&prev.address.road_name, &new.address.road_name) {
        out.push(frag(FragmentKind::Address, "move.road", &[("road", &new.address.road_name)]));
    }
    match (&prev.at_intersection, &new.at_intersection) {
        (None, Some(hit)) => {
            out.push(frag(FragmentKind::Intersection, "move.arrive_intersection", &[("roads", &join_roads(&hit.road_names))]));
        }
        (Some(a), Some(b)) if !same_roads(a, b) => {
            out.push(frag(FragmentKind::Intersection, "move.arrive_intersection", &[("roads", &join_roads(&b.road_names))]));
        }
        (Some(hit), None) => {
            out.push(frag(FragmentKind::Intersection, "move.leave_intersection", &[("roads", &join_roads(&hit.road_names))]));
        }
        _ => {}
    }
    out.extend(place_changes(prev, new, cfg));
    if visit.count > 1 {
        out.push(frag(FragmentKind::Visit, "move.visited", &[]));
    }
    StatusMessage::status(out)
}

/// Places grouped by side, front first: the clause shared by the teleport
/// message and the nearby-places key.
pub fn places_summary(ctx: &LocalContext, cfg: &NavConfig) -> Fragment {
    let radius = format_distance(cfg.nearby_radius);
    if ctx.nearby.is_empty() {
        return frag(FragmentKind::Places, "places.none", &[("radius", &radius)]);
    }
    // (phrase, members) in announcement order
    let mut groups: Vec<(String, Vec<&NearbyPlace>)> = Vec::new();
    if cfg.relative_places {
        for pos in [RelativePosition::InFront, RelativePosition::ToYourLeft, RelativePosition::ToYourRight, RelativePosition::Behind] {
            let members: Vec<&NearbyPlace> = ctx.nearby.iter().filter(|p| p.position == pos).collect();
            if !members.is_empty() {
                groups.push((group_phrase(pos).to_string(), members));
            }
        }
    } else {
        for o in Octant::ALL {
            let mut members: Vec<&NearbyPlace> = ctx.nearby.iter().filter(|p| p.compass() == o).collect();
            members.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.place_id.cmp(&b.place_id)));
            if !members.is_empty() {
                groups.push((compass_phrase(o), members));
            }
        }
    }
    let rendered: Vec<String> = groups
        .iter()
        .map(|(phrase, members)| {
            let items: Vec<String> = members
                .iter()
                .map(|p| {
                    let kind = p.kind_label();
                    render("places.item", &[("article", article(&kind)), ("kind", &kind), ("name", &p.name)])
                })
                .collect();
            if members.len() == 1 {
                render("places.group_one", &[("item", &items[0]), ("position", phrase), ("distance", &format_distance(members[0].distance))])
            } else {
                let max = members.iter().map(|p| p.distance).fold(0.0, f64::max);
                render("places.group_many", &[("items", &join_list(&items)), ("position", phrase), ("distance", &upper_bound_meters(max))])
            }
        })
        .collect();
    let groups_text = match rendered.as_slice() {
        [one] => one.clone(),
        [init @ .., last] => format!("{}, and {}", init.join("; "), last),
        [] => unreachable!(),
    };
    let n = ctx.nearby.len();
    frag(
        FragmentKind::Places,
        "places.summary",
        &[
            ("be", if n == 1 { "is" } else { "are" }),
            ("count", &number_word(n)),
            ("noun", &plural(n, "place", "places")),
            ("radius", &radius),
            ("groups", &groups_text),
        ],
    )
}

fn facing_movements(heading: Octant, graph: &EgocentricGraph, cfg: &NavConfig) -> Fragment {
    let moves = graph.available_movements(cfg);
    if moves.is_empty() {
        return frag(FragmentKind::Movement, "movements.facing_none", &[("compass", heading.name())]);
    }
    frag(
        FragmentKind::Movement,
        "movements.facing",
        &[
            ("compass", heading.name()),
            ("count", &number_word(moves.len())),
            ("noun", &plural(moves.len(), "direction", "directions")),
            ("list", &octant_list(&moves)),
        ],
    )
}

pub fn teleport_announcement(outcome: &TeleportOutcome, ctx: &LocalContext, graph: &EgocentricGraph, cfg: &NavConfig) -> StatusMessage {
    let distance = format_distance(outcome.distance);
    let moved = if outcome.origin_address.same_locality(&ctx.address) {
        frag(
            FragmentKind::Teleport,
            "teleport.moved",
            &[("distance", &distance), ("origin", &outcome.origin_label), ("destination", &outcome.destination.display_name)],
        )
    } else {
        frag(
            FragmentKind::Teleport,
            "teleport.moved_locality",
            &[
                ("distance", &distance),
                ("origin", &outcome.origin_label),
                ("destination", &outcome.destination.display_name),
                ("locality", &ctx.address.locality()),
            ],
        )
    };
    StatusMessage::status(vec![moved, places_summary(ctx, cfg), facing_movements(ctx.heading, graph, cfg)])
}

/// The available-movements key, or the explanation after a failed move.
pub fn available_movements_announcement(
    graph: &EgocentricGraph,
    heading: Octant,
    attempted: Option<StepDirection>,
    cfg: &NavConfig,
) -> StatusMessage {
    let mut out = Vec::new();
    if let Some(dir) = attempted {
        out.push(frag(FragmentKind::Movement, "movements.blocked", &[("direction", dir.word()), ("compass", heading.name())]));
    }
    let moves = graph.available_movements(cfg);
    if moves.is_empty() {
        out.push(frag(FragmentKind::Movement, "movements.none", &[]));
    } else {
        out.push(frag(
            FragmentKind::Movement,
            "movements.list",
            &[
                ("count", &number_word(moves.len())),
                ("noun", &plural(moves.len(), "direction", "directions")),
                ("list", &octant_list(&moves)),
            ],
        ));
    }
    StatusMessage::status(out)
}

pub fn nearby_places_announcement(ctx: &LocalContext, cfg: &NavConfig) -> StatusMessage {
    StatusMessage::status(vec![places_summary(ctx, cfg)])
}

/// Current intersection, if any, and the next one along the heading.
pub fn intersection_announcement(ctx: &LocalContext, next: Option<&IntersectionHit>, cfg: &NavConfig) -> StatusMessage {
    let mut out = Vec::new();
    if let Some(hit) = &ctx.at_intersection {
        out.push(frag(FragmentKind::Intersection, "intersection.current", &[("roads", &join_roads(&hit.road_names))]));
    }
    match next.filter(|h| h.pano_id != ctx.pano_id) {
        Some(hit) => out.push(frag(
            FragmentKind::Intersection,
            "intersection.next",
            &[("roads", &join_roads(&hit.road_names)), ("distance", &format_distance(hit.pano_distance))],
        )),
        None => out.push(frag(FragmentKind::Intersection, "intersection.none_ahead", &[("distance", &format_distance(cfg.jump_max))])),
    }
    StatusMessage::status(out)
}

pub fn pano_metadata_announcement(pano: &Panorama) -> StatusMessage {
    let unknown = catalog::pattern("photo.unknown_photographer");
    let who = pano.photographer.as_deref().filter(|s| !s.trim().is_empty()).unwrap_or(unknown);
    StatusMessage::single(
        FragmentKind::Info,
        "photo.taken",
        &[("month", pano.capture_date.month_name()), ("year", &pano.capture_date.year().to_string()), ("photographer", who)],
    )
}

pub fn where_announcement(ctx: &LocalContext) -> StatusMessage {
    let address = format!("{}, {}", ctx.address.street_line(), ctx.address.locality());
    StatusMessage::single(FragmentKind::Address, "where.at", &[("address", &address), ("compass", ctx.heading.name())])
}

pub fn visits_announcement(visit: &VisitSummary, now_ms: u64) -> StatusMessage {
    match visit.previous_visit_ms {
        Some(prev) if visit.count > 1 => StatusMessage::single(
            FragmentKind::Visit,
            "visits.repeat",
            &[("count", &number_word(visit.count as usize)), ("ago", &elapsed(now_ms.saturating_sub(prev)))],
        ),
        _ => StatusMessage::single(FragmentKind::Visit, "visits.first", &[]),
    }
}

#[cfg(test)]
mod tests;
