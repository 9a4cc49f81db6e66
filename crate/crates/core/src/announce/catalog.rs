//! Every user-facing sentence pattern, keyed by a stable id.
//!
//! Patterns use `{name}` placeholders. `docs/messages.md` is generated from
//! this table; a test keeps the two in sync.

pub struct Template {
    pub id: &'static str,
    pub pattern: &'static str,
    pub note: &'static str,
}

macro_rules! catalog {
    ($($id:literal => $pattern:literal, $note:literal;)*) => {
        pub const CATALOG: &[Template] = &[$(Template { id: $id, pattern: $pattern, note: $note }),*];
    };
}

catalog! {
    "pan.facing" => "Now facing: {compass}.", "after every pan";
    "pan.forward" => "You can move forward to {road}.", "a pano lies ahead";
    "pan.no_forward" => "You cannot move forward.", "nothing ahead";
    "pan.facing_places" => "You are facing {places}.", "places in the facing cone, items from place.facing_item";
    "place.facing_item" => "{name} {distance} away", "";
    "move.step" => "You stepped {direction} {distance}.", "";
    "move.jump_intersection" => "You jumped {distance} to the next intersection.", "";
    "move.jump" => "You jumped {distance}.", "jump stopped at the distance cap";
    "move.back" => "You went back {distance}.", "";
    "move.road" => "You are now on {road}.", "road changed";
    "move.arrive_intersection" => "You are at the intersection of {roads}.", "";
    "move.leave_intersection" => "You have left the intersection of {roads}.", "";
    "move.visited" => "You have been here before.", "revisit";
    "place.now" => "{name} is now {position} {distance} away.", "new place, or one that changed side";
    "place.still" => "{name} is still {position} but now {distance} away.", "same side, new distance";
    "place.gone" => "{name} is no longer within {radius}.", "";
    "teleport.moved" => "You teleported {distance} from {origin} to {destination}.", "locality unchanged";
    "teleport.moved_locality" => "You teleported {distance} from {origin} to {destination} in {locality}.", "locality changed";
    "places.summary" => "There {be} {count} {noun} within {radius}, including: {groups}.", "";
    "places.group_one" => "{item}, is {position} {distance} away", "one place on a side";
    "places.group_many" => "{items}, are {position} less than {distance} away", "two or more on a side";
    "places.item" => "{article} {kind}, {name}", "";
    "places.none" => "There are no places within {radius}.", "";
    "movements.facing" => "You are facing {compass} and can move in {count} {noun}: {list}.", "";
    "movements.facing_none" => "You are facing {compass} and cannot move in any direction.", "";
    "movements.blocked" => "You cannot move {direction} along your current heading of {compass}.", "failed step or jump";
    "movements.list" => "You can move in {count} {noun}: {list}.", "";
    "movements.none" => "You cannot move in any direction.", "";
    "intersection.current" => "You are at the intersection of {roads}.", "";
    "intersection.next" => "The next intersection is {roads}, {distance} ahead.", "";
    "intersection.none_ahead" => "No intersection within {distance} ahead.", "";
    "photo.taken" => "This Street View image was taken on {month} {year} by {photographer}.", "";
    "photo.unknown_photographer" => "an unknown photographer", "fallback value";
    "where.at" => "You are at {address}, facing {compass}.", "";
    "visits.first" => "This is your first visit here.", "";
    "visits.repeat" => "You have been here {count} times. Your last visit was {ago} ago.", "";
    "error.not_found" => "No match for {query}.", "";
    "error.no_imagery" => "There is no Street View imagery within {distance} of {query}.", "";
    "error.nothing_to_undo" => "There is nowhere to go back to.", "";
    "error.provider" => "The map service is not responding. Please try again.", "";
    "error.ai" => "The AI assistant is not available right now.", "";
    "error.chat_closed" => "Chat is not open.", "";
    "chat.opened" => "Chat is open.", "";
    "chat.closed" => "Chat closed.", "";
    "chat.cannot_move" => "I can't move you {direction} from here.", "command failed to move";
    "speech.stop" => "", "stop signal, never voiced";
}

pub fn pattern(id: &str) -> &'static str {
    CATALOG
        .iter()
        .find(|t| t.id == id)
        .unwrap_or_else(|| panic!("unknown message template {id}"))
        .pattern
}

/// Fills `{name}` placeholders. Panics on unknown ids or missing values so a
/// template mistake fails loudly in tests instead of reaching a user.
pub fn render(id: &str, args: &[(&str, &str)]) -> String {
    let pat = pattern(id);
    let mut out = String::with_capacity(pat.len() + 32);
    let mut rest = pat;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').map(|c| open + c).expect("unclosed placeholder");
        let key = &rest[open + 1..close];
        let value = args
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("template {id} needs {{{key}}}"));
        out.push_str(value);
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

pub fn placeholders(pattern: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        let close = open + rest[open..].find('}').unwrap();
        out.push(&rest[open + 1..close]);
        rest = &rest[close + 1..];
    }
    out
}

/// The catalog as a markdown table.
pub fn markdown() -> String {
    let mut s = String::from(
        "# Message catalog\n\nGenerated from `crates/core/src/announce/catalog.rs`. Regenerate with\n`UPDATE_GOLDEN=1 cargo test -p srai-core catalog`.\n\n| id | pattern | used for |\n|---|---|---|\n",
    );
    for t in CATALOG {
        s.push_str(&format!("| `{}` | {} | {} |\n", t.id, t.pattern.replace('|', "\\|"), t.note));
    }
    s
}
