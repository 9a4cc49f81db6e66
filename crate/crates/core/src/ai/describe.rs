use serde::{Deserialize, Serialize};

use super::{
    render_describer_prompt, render_structured_suffix, AiError, DescribeRequest, DescriberMode, GeoContext,
    ModelProvider, UserProfile,
};
use crate::world::ViewCapture;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuredDescription {
    pub description: String,
    pub mobility_features: Vec<String>,
    pub obstacles: Vec<String>,
    pub safety_summary: String,
    pub followups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Description {
    pub prompt: String,
    pub response: String,
    pub structured: Option<StructuredDescription>,
    /// Model calls made, including a retry after a schema failure.
    pub attempts: usize,
}

impl Description {
    pub fn text(&self) -> &str {
        match &self.structured {
            Some(s) => &s.description,
            None => &self.response,
        }
    }
}

pub fn parse_structured(raw: &str) -> Result<StructuredDescription, AiError> {
    let s: StructuredDescription = serde_json::from_str(raw.trim()).map_err(|e| AiError::Schema(e.to_string()))?;
    if s.followups.len() != 3 {
        return Err(AiError::Schema(format!("expected 3 followups, got {}", s.followups.len())));
    }
    if s.description.trim().is_empty() {
        return Err(AiError::Schema("empty description".into()));
    }
    Ok(s)
}

pub fn describe_view(
    provider: &dyn ModelProvider,
    view: &ViewCapture,
    ctx: &GeoContext,
    profile: &UserProfile,
    mode: DescriberMode,
    structured: bool,
) -> Result<Description, AiError> {
    let mut prompt = render_describer_prompt(ctx, profile, mode);
    if structured {
        prompt.push_str(render_structured_suffix());
    }
    let req = DescribeRequest { prompt, view: view.clone(), context: ctx.clone(), mode, structured };
    let mut attempts = 0;
    loop {
        attempts += 1;
        let response = provider.describe(&req)?;
        if !structured {
            return Ok(Description { prompt: req.prompt, response, structured: None, attempts });
        }
        match parse_structured(&response) {
            Ok(s) => return Ok(Description { prompt: req.prompt, response, structured: Some(s), attempts }),
            Err(e) if attempts >= 2 => return Err(e),
            Err(e) => log::warn!("structured description rejected, retrying: {e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ai::{MockFaults, MockModelProvider, ModelError};
    use crate::geo::{GeoPoint, Octant};
    use crate::synth::FixtureBuilder;

    fn setup() -> (MockModelProvider, ViewCapture, GeoContext) {
        let mut b = FixtureBuilder::new("d", GeoPoint::new(5.0, 5.0).unwrap());
        b.pano("p", 0.0, 0.0, "Elm Street").annotate("p", Octant::North, &["sidewalk", "trash can"]);
        let m = MockModelProvider::new(Arc::new(b.world()));
        let view = ViewCapture::new("p", Octant::North, 640, "p/North".into());
        let ctx = GeoContext {
            selected_place: None,
            closest_address: "Elm Street".into(),
            heading: Octant::North,
            neighborhood: None,
            city: "Springfield".into(),
            state: None,
            country: "United States".into(),
            nearby_places: Vec::new(),
        };
        (m, view, ctx)
    }

    #[test]
    fn plain_description() {
        let (m, v, c) = setup();
        let d = describe_view(&m, &v, &c, &UserProfile::default(), DescriberMode::Default, false).unwrap();
        assert_eq!(d.text(), "You are looking North along Elm Street. In view: a sidewalk and a trash can.");
        assert_eq!(d.attempts, 1);
    }

    #[test]
    fn structured_has_three_followups() {
        let (m, v, c) = setup();
        let d = describe_view(&m, &v, &c, &UserProfile::default(), DescriberMode::Default, true).unwrap();
        let s = d.structured.unwrap();
        assert_eq!(s.followups.len(), 3);
        assert_eq!(s.mobility_features, ["sidewalk"]);
        assert_eq!(s.obstacles, ["trash can"]);
        assert!(d.prompt.contains("\"followups\""));
    }

    #[test]
    fn retries_once_on_schema_error() {
        let (m, v, c) = setup();
        m.set_faults(MockFaults { malformed_structured: 1, ..Default::default() });
        let d = describe_view(&m, &v, &c, &UserProfile::default(), DescriberMode::Default, true).unwrap();
        assert_eq!(d.attempts, 2);
        m.set_faults(MockFaults { malformed_structured: 2, ..Default::default() });
        let e = describe_view(&m, &v, &c, &UserProfile::default(), DescriberMode::Default, true).unwrap_err();
        assert!(matches!(e, AiError::Schema(_)));
    }

    #[test]
    fn provider_failure_surfaces() {
        let (m, v, c) = setup();
        m.set_faults(MockFaults { timeout: true, ..Default::default() });
        let e = describe_view(&m, &v, &c, &UserProfile::default(), DescriberMode::Default, false).unwrap_err();
        assert_eq!(e, AiError::Model(ModelError::Timeout));
    }

    #[test]
    fn schema_checks() {
        assert!(parse_structured("not json").is_err());
        let two = r#"{"description":"x","mobility_features":[],"obstacles":[],"safety_summary":"","followups":["a","b"]}"#;
        assert!(parse_structured(two).unwrap_err().to_string().contains("3 followups"));
        let ok = two.replace(r#""b"]"#, r#""b","c"]"#);
        assert!(parse_structured(&ok).is_ok());
    }
}
