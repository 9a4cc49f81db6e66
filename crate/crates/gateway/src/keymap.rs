//! Hotkey table and terminal commands, mapped onto engine actions.

use std::fmt;

use srai_core::ai::DescriberMode;
use srai_core::engine::{Action, InfoKind, InputSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Key {
    Left,
    Right,
    Up,
    Down,
    Esc,
    AltSpace,
    /// Alt plus a lowercase ASCII letter.
    Alt(char),
}

impl Key {
    /// Accepts names like `Left`, `esc`, `Alt+J`, `alt+space`.
    pub fn parse(s: &str) -> Option<Key> {
        let lower = s.trim().to_ascii_lowercase();
        Some(match lower.as_str() {
            "left" => Key::Left,
            "right" => Key::Right,
            "up" => Key::Up,
            "down" => Key::Down,
            "esc" | "escape" => Key::Esc,
            "alt+space" | "alt+spacebar" => Key::AltSpace,
            other => {
                let rest = other.strip_prefix("alt+")?;
                let mut chars = rest.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => Key::Alt(c),
                    _ => return None,
                }
            }
        })
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Left => f.write_str("Left"),
            Key::Right => f.write_str("Right"),
            Key::Up => f.write_str("Up"),
            Key::Down => f.write_str("Down"),
            Key::Esc => f.write_str("Esc"),
            Key::AltSpace => f.write_str("Alt+Space"),
            Key::Alt(c) => write!(f, "Alt+{}", c.to_ascii_uppercase()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    PanLeft,
    PanRight,
    StepForward,
    StepBackward,
    Back,
    Jump,
    Describe,
    Chat(InputSource),
    Repeat,
    StopSpeech,
    Info(InfoKind),
}

impl Binding {
    /// The action a key press sends. Chat keys without text open the chat.
    pub fn action(self, text: Option<&str>, mode: DescriberMode) -> Action {
        match self {
            Binding::PanLeft => Action::PanLeft,
            Binding::PanRight => Action::PanRight,
            Binding::StepForward => Action::StepForward,
            Binding::StepBackward => Action::StepBackward,
            Binding::Back => Action::Back,
            Binding::Jump => Action::Jump,
            Binding::Describe => Action::Describe { mode, structured: false },
            Binding::Chat(source) => match text.map(str::trim).filter(|t| !t.is_empty()) {
                Some(t) => Action::ChatTurn { input: t.to_string(), source },
                None => Action::ChatOpen,
            },
            Binding::Repeat => Action::Repeat,
            Binding::StopSpeech => Action::StopSpeech,
            Binding::Info(kind) => Action::Info { kind },
        }
    }
}

pub struct KeyRow {
    pub key: Key,
    pub binding: Binding,
    pub help: &'static str,
}

const fn row(key: Key, binding: Binding, help: &'static str) -> KeyRow {
    KeyRow { key, binding, help }
}

pub const KEYMAP: [KeyRow; 17] = [
    row(Key::Left, Binding::PanLeft, "turn left 45 degrees"),
    row(Key::Right, Binding::PanRight, "turn right 45 degrees"),
    row(Key::Up, Binding::StepForward, "step forward"),
    row(Key::Down, Binding::StepBackward, "step backward, keeping the heading"),
    row(Key::Alt('b'), Binding::Back, "go back to the previous pano"),
    row(Key::Alt('j'), Binding::Jump, "jump to the next intersection or up to the jump limit"),
    row(Key::Alt('d'), Binding::Describe, "describe the current view"),
    row(Key::Alt('c'), Binding::Chat(InputSource::Typed), "chat by typing: Alt+C <text>"),
    row(Key::AltSpace, Binding::Chat(InputSource::Speech), "chat by speaking: Alt+Space <transcript>"),
    row(Key::Alt('a'), Binding::Repeat, "repeat the previous output"),
    row(Key::Esc, Binding::StopSpeech, "stop speech"),
    row(Key::Alt('w'), Binding::Info(InfoKind::Where), "where am I"),
    row(Key::Alt('n'), Binding::Info(InfoKind::Nearby), "nearby places"),
    row(Key::Alt('i'), Binding::Info(InfoKind::Intersections), "current and next intersection"),
    row(Key::Alt('m'), Binding::Info(InfoKind::Movements), "possible movements"),
    row(Key::Alt('v'), Binding::Info(InfoKind::Visits), "visit history for this pano"),
    row(Key::Alt('p'), Binding::Info(InfoKind::Photo), "photo date and photographer"),
];

pub fn binding(key: Key) -> Option<Binding> {
    KEYMAP.iter().find(|r| r.key == key).map(|r| r.binding)
}

/// Terminal commands for the non-hotkey controls (search box, describe button, chat close).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Teleport(String),
    Generate,
    CloseChat,
    Help,
    Quit,
}

pub const COMMANDS: [(&str, &str); 5] = [
    (":teleport <query>", "teleport to a place or address"),
    (":generate", "structured description with follow-up questions"),
    (":close", "close the chat"),
    (":help", "show this list"),
    (":quit", "leave"),
];

impl Command {
    pub fn parse(line: &str) -> Result<Command, String> {
        let body = line.trim().strip_prefix(':').ok_or_else(|| format!("not a command: {line}"))?;
        let (name, arg) = match body.split_once(char::is_whitespace) {
            Some((n, a)) => (n, a.trim()),
            None => (body, ""),
        };
        match name {
            "teleport" | "t" if !arg.is_empty() => Ok(Command::Teleport(arg.to_string())),
            "teleport" | "t" => Err(":teleport needs a place or address".into()),
            "generate" => Ok(Command::Generate),
            "close" => Ok(Command::CloseChat),
            "help" | "h" => Ok(Command::Help),
            "quit" | "q" => Ok(Command::Quit),
            other => Err(format!("unknown command :{other}")),
        }
    }

    pub fn action(&self, mode: DescriberMode) -> Option<Action> {
        match self {
            Command::Teleport(q) => Some(Action::Teleport { query: q.clone() }),
            Command::Generate => Some(Action::Describe { mode, structured: true }),
            Command::CloseChat => Some(Action::ChatClose),
            Command::Help | Command::Quit => None,
        }
    }
}

pub fn help_text() -> String {
    let mut out = String::from("Keys:\n");
    for r in &KEYMAP {
        out.push_str(&format!("  {:<10} {}\n", r.key.to_string(), r.help));
    }
    out.push_str("Commands:\n");
    for (c, h) in COMMANDS {
        out.push_str(&format!("  {c:<18} {h}\n"));
    }
    out
}
