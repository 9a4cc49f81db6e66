//! Fixture references, config overrides and session construction.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{Map, Value};

use srai_core::ai::UserProfile;
use srai_core::engine::Navigator;
use srai_core::geo::Octant;
use srai_core::nav::NavConfig;
use srai_core::session::{Clock, FileSink, LogSink, NullSink, Position};
use srai_core::synth;
use srai_core::world::World;

use crate::api::{GatewayError, StartSpec};

pub const BUILTIN_PREFIX: &str = "builtin:";

pub struct LoadedFixture {
    pub name: String,
    pub world: Arc<World>,
    pub default_start: String,
}

/// Resolves `builtin:<name>` or a fixture file path.
pub fn load_fixture_ref(reference: &str) -> Result<LoadedFixture, GatewayError> {
    if let Some(name) = reference.strip_prefix(BUILTIN_PREFIX) {
        let world = synth::builtin(name).ok_or_else(|| {
            GatewayError::Fixture(format!("no builtin fixture {name:?}; known: {}", synth::BUILTIN_NAMES.join(", ")))
        })?;
        let start = synth::builtin_start(name).expect("every builtin has a start").to_string();
        return Ok(LoadedFixture { name: reference.to_string(), world: Arc::new(world), default_start: start });
    }
    let path = Path::new(reference);
    let file = File::open(path).map_err(|e| GatewayError::Fixture(format!("{reference}: {e}")))?;
    let world = World::load(file).map_err(|e| GatewayError::Fixture(format!("{reference}: {e}")))?;
    let default_start = world
        .panos()
        .first()
        .map(|p| p.id.clone())
        .ok_or_else(|| GatewayError::Fixture(format!("{reference}: no panoramas")))?;
    Ok(LoadedFixture { name: reference.to_string(), world: Arc::new(world), default_start })
}

/// Overlays named fields onto `base`; unknown names are an error.
pub fn apply_overrides(base: &NavConfig, overrides: &Map<String, Value>) -> Result<NavConfig, GatewayError> {
    let mut doc = serde_json::to_value(base).map_err(|e| GatewayError::Config(e.to_string()))?;
    let fields = doc.as_object_mut().expect("NavConfig serializes to an object");
    for (k, v) in overrides {
        if !fields.contains_key(k) {
            return Err(GatewayError::Config(format!("unknown field {k:?}")));
        }
        fields.insert(k.clone(), v.clone());
    }
    let cfg: NavConfig = serde_json::from_value(doc).map_err(|e| GatewayError::Config(e.to_string()))?;
    cfg.validate().map_err(|e| GatewayError::Config(e.to_string()))?;
    Ok(cfg)
}

/// Reads a JSON object of NavConfig overrides.
pub fn load_config_file(path: &Path) -> Result<NavConfig, GatewayError> {
    let text = std::fs::read_to_string(path).map_err(|e| GatewayError::Config(format!("{}: {e}", path.display())))?;
    let overrides: Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| GatewayError::Config(format!("{}: {e}", path.display())))?;
    apply_overrides(&NavConfig::default(), &overrides)
}

pub struct SessionOptions {
    pub fixture: String,
    pub start: Option<StartSpec>,
    pub config: NavConfig,
    pub profile: Option<String>,
    pub log_path: Option<PathBuf>,
}

pub fn open_navigator(opts: &SessionOptions, clock: Arc<dyn Clock>) -> Result<(Navigator, LoadedFixture), GatewayError> {
    let fixture = load_fixture_ref(&opts.fixture)?;
    let spec = opts.start.as_ref();
    let pano = spec.and_then(|s| s.pano_id.as_deref()).unwrap_or(&fixture.default_start);
    let start = Position::new(pano, spec.and_then(|s| s.heading).unwrap_or(Octant::North));
    let sink: Box<dyn LogSink> = match &opts.log_path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(FileSink::new(p))
        }
        None => Box::new(NullSink),
    };
    let mut nav = Navigator::with_mock(fixture.world.clone(), opts.config.clone(), start, clock, sink)?;
    if let Some(p) = &opts.profile {
        nav.set_profile(UserProfile { description: Some(p.clone()) });
    }
    Ok((nav, fixture))
}
