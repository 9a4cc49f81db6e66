use std::fs::File;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use srai_core::nav::NavConfig;
use srai_core::session::SystemClock;
use srai_gateway::api::{GatewayError, StartSpec};
use srai_gateway::cli::{Cli, SpeechMode};
use srai_gateway::service::{GatewaySession, Registry, ServiceConfig};
use srai_gateway::setup::{load_config_file, open_navigator, SessionOptions};
use srai_gateway::speech::{MockSpeech, VoiceSettings, Voicer};
use srai_gateway::terminal::Terminal;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(GatewayError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srai: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), GatewayError> {
    let config = match &cli.config {
        Some(p) => load_config_file(p)?,
        None => NavConfig::default(),
    };
    let voicer = match cli.speech {
        SpeechMode::Off => None,
        SpeechMode::Mock => {
            let settings = VoiceSettings::with_rate(cli.speech_rate).map_err(|e| GatewayError::Config(e.to_string()))?;
            Some(Voicer::new(Arc::new(MockSpeech::new()), settings))
        }
    };

    if let Some(addr) = cli.serve {
        let registry = Arc::new(Registry::new(ServiceConfig {
            base_config: config,
            default_fixture: cli.fixture.clone(),
            log_dir: cli.log_dir.clone(),
            voicer,
            clock: Arc::new(SystemClock),
        }));
        let rt = tokio::runtime::Runtime::new()?;
        return Ok(rt.block_on(srai_gateway::http::serve(addr, registry))?);
    }

    let log_path = cli.log.clone().or_else(|| cli.log_dir.as_ref().map(|d| d.join(terminal_log_name())));
    let opts = SessionOptions {
        fixture: cli.fixture.clone(),
        start: Some(StartSpec { pano_id: cli.start.clone(), heading: Some(cli.heading) }),
        config,
        profile: cli.profile.clone(),
        log_path,
    };
    let (nav, fixture) = open_navigator(&opts, Arc::new(SystemClock))?;
    let session = GatewaySession::new("terminal", &fixture.name, nav, voicer);
    let mut term = Terminal::new(session, io::stdout().lock(), cli.describer.into());
    match &cli.script {
        Some(p) => {
            let f = File::open(p).map_err(|e| GatewayError::InvalidRequest(format!("{}: {e}", p.display())))?;
            term.run_script(BufReader::new(f))?;
        }
        None => term.run_interactive(io::stdin().lock())?,
    }
    Ok(())
}

fn terminal_log_name() -> PathBuf {
    let ms = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    PathBuf::from(format!("terminal-{ms}.ndjson"))
}
