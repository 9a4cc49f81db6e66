use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Every navigation and orchestration threshold, in meters, degrees, pixels
/// or tokens. Defaults are the tuned values; all of them can be overridden
/// from a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NavConfig {
    pub pan_increment: f64,
    pub facing_cone: f64,
    pub facing_max_distance: f64,
    pub nearby_radius: f64,
    pub grid_extent: f64,
    pub grid_step: f64,
    pub ray_step: f64,
    pub jump_max: f64,
    pub forward_tolerance: f64,
    pub undo_depth: usize,
    pub capture_size: u32,
    pub chat_token_budget: usize,
    /// Square side used to decide whether the current pano sits on an intersection.
    pub intersection_extent: f64,
    /// Teleports landing farther than this from any pano are refused.
    pub teleport_max_distance: f64,
    pub tokens_per_view: usize,
    pub chars_per_token: usize,
    /// Views never trimmed from the chat context window.
    pub chat_keep_views: usize,
    /// Phrase nearby places relative to the user (left, behind) instead of by compass.
    pub relative_places: bool,
}

impl Default for NavConfig {
    fn default() -> Self {
        NavConfig {
            pan_increment: 45.0,
            facing_cone: 45.0,
            facing_max_distance: 35.0,
            nearby_radius: 50.0,
            grid_extent: 20.0,
            grid_step: 5.0,
            ray_step: 15.0,
            jump_max: 70.0,
            forward_tolerance: 22.5,
            undo_depth: 1,
            capture_size: 640,
            chat_token_budget: 1_048_576,
            intersection_extent: 10.0,
            teleport_max_distance: 1000.0,
            tokens_per_view: 258,
            chars_per_token: 4,
            chat_keep_views: 8,
            relative_places: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid navigation config: {0}")]
pub struct ConfigError(pub String);

impl NavConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("pan_increment", self.pan_increment),
            ("facing_cone", self.facing_cone),
            ("facing_max_distance", self.facing_max_distance),
            ("nearby_radius", self.nearby_radius),
            ("grid_extent", self.grid_extent),
            ("grid_step", self.grid_step),
            ("ray_step", self.ray_step),
            ("jump_max", self.jump_max),
            ("forward_tolerance", self.forward_tolerance),
            ("intersection_extent", self.intersection_extent),
            ("teleport_max_distance", self.teleport_max_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError(format!("{name} must be positive, got {v}")));
            }
        }
        // sessions only ever face octants
        if self.pan_increment != 45.0 {
            return Err(ConfigError(format!("pan_increment must be 45, got {}", self.pan_increment)));
        }
        if self.forward_tolerance > self.pan_increment / 2.0 {
            return Err(ConfigError("forward_tolerance must not exceed half the pan increment".into()));
        }
        let counts = [
            ("undo_depth", self.undo_depth),
            ("capture_size", self.capture_size as usize),
            ("chat_token_budget", self.chat_token_budget),
            ("chars_per_token", self.chars_per_token),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(ConfigError(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_partitioning() {
        let cfg = NavConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.forward_tolerance, cfg.pan_increment / 2.0);
    }

    #[test]
    fn partial_overrides_keep_defaults() {
        let cfg: NavConfig = serde_json::from_str(r#"{"jump_max": 100.0}"#).unwrap();
        assert_eq!(cfg.jump_max, 100.0);
        assert_eq!(cfg.ray_step, 15.0);
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = NavConfig { ray_step: 0.0, ..NavConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = NavConfig { forward_tolerance: 30.0, ..NavConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = NavConfig { undo_depth: 0, ..NavConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
