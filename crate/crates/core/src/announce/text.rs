//! Number, distance and list wording.

use crate::geo::{Octant, RelativePosition};

const SMALL: [&str; 21] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];

/// Spelled out up to twenty, digits after.
pub fn number_word(n: usize) -> String {
    SMALL.get(n).map(|s| s.to_string()).unwrap_or_else(|| n.to_string())
}

pub fn plural(n: usize, one: &str, many: &str) -> String {
    if n == 1 { one.into() } else { many.into() }
}

pub fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Whole meters below 100 m, tens of meters up to a kilometer, then whole
/// kilometers with a thousands separator.
pub fn rounded_meters(m: f64) -> u64 {
    let m = m.max(0.0);
    if m < 100.0 {
        m.round() as u64
    } else {
        ((m / 10.0).round() * 10.0) as u64
    }
}

pub fn format_distance(m: f64) -> String {
    let r = rounded_meters(m);
    if r >= 1000 {
        format!("{} km", thousands((m / 1000.0).round() as u64))
    } else if r == 1 {
        "1 meter".into()
    } else {
        format!("{r} meters")
    }
}

/// Smallest whole meter count strictly above `m`.
pub fn upper_bound_meters(m: f64) -> String {
    let n = m.max(0.0).floor() as u64 + 1;
    if n == 1 { "1 meter".into() } else { format!("{n} meters") }
}

/// "A", "A and B", "A, B, and C".
pub fn join_list<S: AsRef<str>>(items: &[S]) -> String {
    match items {
        [] => String::new(),
        [a] => a.as_ref().into(),
        [a, b] => format!("{} and {}", a.as_ref(), b.as_ref()),
        [init @ .., last] => {
            let head: Vec<&str> = init.iter().map(|s| s.as_ref()).collect();
            format!("{}, and {}", head.join(", "), last.as_ref())
        }
    }
}

/// "A and B" for intersections, whatever the count.
pub fn join_roads<S: AsRef<str>>(roads: &[S]) -> String {
    join_list(roads)
}

pub fn article(word: &str) -> &'static str {
    match word.chars().next().map(|c| c.to_ascii_lowercase()) {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

pub fn octant_list(octants: &[Octant]) -> String {
    let names: Vec<&str> = octants.iter().map(|o| o.name()).collect();
    join_list(&names)
}

/// Phrase for a single place ("is now on your left").
pub fn position_phrase(p: RelativePosition) -> &'static str {
    match p {
        RelativePosition::InFront => "in front of you",
        RelativePosition::ToYourLeft => "on your left",
        RelativePosition::ToYourRight => "on your right",
        RelativePosition::Behind => "behind you",
    }
}

/// Phrase for a group in a summary ("are to your left").
pub fn group_phrase(p: RelativePosition) -> &'static str {
    match p {
        RelativePosition::InFront => "ahead of you",
        RelativePosition::ToYourLeft => "to your left",
        RelativePosition::ToYourRight => "to your right",
        RelativePosition::Behind => "behind you",
    }
}

pub fn compass_phrase(o: Octant) -> String {
    format!("to the {}", o.name().to_lowercase())
}

/// Coarse elapsed time, e.g. "45 seconds", "3 minutes", "2 hours".
pub fn elapsed(ms: u64) -> String {
    let s = ms / 1000;
    let (n, unit) = if s < 60 {
        (s, "second")
    } else if s < 3600 {
        (s / 60, "minute")
    } else if s < 86_400 {
        (s / 3600, "hour")
    } else {
        (s / 86_400, "day")
    };
    if n == 1 { format!("1 {unit}") } else { format!("{n} {unit}s") }
}

pub fn times_word(n: u32) -> String {
    match n {
        1 => "once".into(),
        2 => "twice".into(),
        n => format!("{} times", number_word(n as usize)),
    }
}
