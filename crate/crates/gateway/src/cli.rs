//! Command-line options.

use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use srai_core::ai::DescriberMode;
use srai_core::geo::Octant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpeechMode {
    /// Text only; leave voicing to a screen reader.
    Off,
    /// Capture utterances with the mock speech provider.
    Mock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DescriberArg {
    Default,
    TourGuide,
}

impl From<DescriberArg> for DescriberMode {
    fn from(d: DescriberArg) -> Self {
        match d {
            DescriberArg::Default => DescriberMode::Default,
            DescriberArg::TourGuide => DescriberMode::TourGuide,
        }
    }
}

fn parse_octant(s: &str) -> Result<Octant, String> {
    Octant::ALL
        .into_iter()
        .find(|o| o.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("expected a compass direction such as North or Southwest, got {s:?}"))
}

#[derive(Debug, Clone, Parser)]
#[command(name = "srai", version, about = "Street-level navigation for screen-reader users, over a synthetic world")]
pub struct Cli {
    /// Fixture file path or builtin:<name>.
    #[arg(long, env = "SRAI_FIXTURE", default_value = "builtin:bankside")]
    pub fixture: String,

    /// Starting pano id; the fixture's default when absent.
    #[arg(long)]
    pub start: Option<String>,

    #[arg(long, value_parser = parse_octant, default_value = "North")]
    pub heading: Octant,

    /// Serve the HTTP API on ADDR instead of running the terminal client.
    #[arg(long, value_name = "ADDR")]
    pub serve: Option<SocketAddr>,

    #[arg(long, value_enum, default_value_t = SpeechMode::Off)]
    pub speech: SpeechMode,

    #[arg(long, default_value_t = 1.0)]
    pub speech_rate: f32,

    /// JSON file of NavConfig overrides.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Event log file for the terminal session.
    #[arg(long, value_name = "PATH")]
    pub log: Option<PathBuf>,

    /// Directory for per-session event logs.
    #[arg(long, env = "SRAI_LOG_DIR", value_name = "DIR")]
    pub log_dir: Option<PathBuf>,

    /// Replay a keystroke file and exit.
    #[arg(long, value_name = "PATH")]
    pub script: Option<PathBuf>,

    /// Free-text user profile replacing the default one.
    #[arg(long)]
    pub profile: Option<String>,

    #[arg(long, value_enum, default_value_t = DescriberArg::Default)]
    pub describer: DescriberArg,
}
