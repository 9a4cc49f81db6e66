//! Line-oriented terminal client: one key name or command per line.

use std::io::{self, BufRead, Write};

use srai_core::ai::DescriberMode;
use srai_core::engine::{transcript_line, Action};

use crate::keymap::{binding, help_text, Command, Key};
use crate::service::GatewaySession;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Key(Key, Option<String>),
    Command(Command),
    Empty,
    Invalid(String),
}

pub fn parse_input(line: &str) -> Input {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') {
        return Input::Empty;
    }
    if line.starts_with(':') {
        return match Command::parse(line) {
            Ok(c) => Input::Command(c),
            Err(e) => Input::Invalid(e),
        };
    }
    let (token, rest) = match line.split_once(char::is_whitespace) {
        Some((t, r)) => (t, Some(r.trim().to_string()).filter(|r| !r.is_empty())),
        None => (line, None),
    };
    match Key::parse(token) {
        Some(k) => Input::Key(k, rest),
        None => Input::Invalid(format!("unknown key {token:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

pub struct Terminal<W: Write> {
    session: GatewaySession,
    out: W,
    mode: DescriberMode,
}

impl<W: Write> Terminal<W> {
    pub fn new(session: GatewaySession, out: W, mode: DescriberMode) -> Terminal<W> {
        Terminal { session, out, mode }
    }

    pub fn session(&self) -> &GatewaySession {
        &self.session
    }

    pub fn into_parts(self) -> (GatewaySession, W) {
        (self.session, self.out)
    }

    /// Resolves a line to the action it sends, if any.
    pub fn action_for(&self, input: &Input) -> Option<Action> {
        match input {
            Input::Key(k, text) => binding(*k).map(|b| b.action(text.as_deref(), self.mode)),
            Input::Command(c) => c.action(self.mode),
            Input::Empty | Input::Invalid(_) => None,
        }
    }

    pub fn handle_line(&mut self, line: &str) -> io::Result<Flow> {
        let input = parse_input(line);
        match &input {
            Input::Empty => return Ok(Flow::Continue),
            Input::Invalid(why) => {
                writeln!(self.out, "[help] {why}. Type :help for the key list.")?;
                return Ok(Flow::Continue);
            }
            Input::Command(Command::Help) => {
                write!(self.out, "{}", help_text())?;
                return Ok(Flow::Continue);
            }
            Input::Command(Command::Quit) => return Ok(Flow::Quit),
            Input::Key(k, _) if binding(*k).is_none() => {
                writeln!(self.out, "[help] {k} is not bound. Type :help for the key list.")?;
                return Ok(Flow::Continue);
            }
            _ => {}
        }
        let action = self.action_for(&input).expect("bound keys and action commands resolve");
        match self.session.act(&action) {
            Ok(resp) => {
                for m in resp.messages.iter().filter(|m| !m.text.is_empty()) {
                    writeln!(self.out, "{}", transcript_line(m))?;
                }
                for q in &resp.followups {
                    writeln!(self.out, "  follow-up: {q}")?;
                }
            }
            Err(e) => writeln!(self.out, "[error] {e}")?,
        }
        Ok(Flow::Continue)
    }

    /// Replays a keystroke file, echoing each input line before its output.
    pub fn run_script<R: BufRead>(&mut self, script: R) -> io::Result<()> {
        for line in script.lines() {
            let line = line?;
            if parse_input(&line) == Input::Empty {
                continue;
            }
            writeln!(self.out, "> {}", line.trim())?;
            if self.handle_line(&line)? == Flow::Quit {
                break;
            }
        }
        self.session.close();
        self.out.flush()
    }

    pub fn run_interactive<R: BufRead>(&mut self, input: R) -> io::Result<()> {
        writeln!(self.out, "Type a key name such as Left, Up or Alt+W and press Enter. :help lists every key.")?;
        write!(self.out, "> ")?;
        self.out.flush()?;
        for line in input.lines() {
            if self.handle_line(&line?)? == Flow::Quit {
                break;
            }
            write!(self.out, "> ")?;
            self.out.flush()?;
        }
        writeln!(self.out)?;
        self.session.close();
        self.out.flush()
    }
}
