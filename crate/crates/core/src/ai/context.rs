use serde::{Deserialize, Serialize};

use crate::announce::LocalContext;
use crate::geo::{GeoPoint, Octant, RelativePosition};
use crate::world::Place;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoPlace {
    pub name: String,
    pub place_type: String,
    pub editorial_summary: Option<String>,
    pub location: GeoPoint,
    pub distance: f64,
    pub heading_offset: f64,
    pub relative_position: RelativePosition,
}

/// The nearby-world snapshot attached to every model call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoContext {
    pub selected_place: Option<String>,
    pub closest_address: String,
    pub heading: Octant,
    pub neighborhood: Option<String>,
    pub city: String,
    pub state: Option<String>,
    pub country: String,
    /// Ascending by distance.
    pub nearby_places: Vec<GeoPlace>,
}

pub fn assemble_geo_context(local: &LocalContext, selected: Option<&Place>) -> GeoContext {
    let mut nearby: Vec<(&str, GeoPlace)> = local
        .nearby
        .iter()
        .map(|p| {
            (
                p.place_id.as_str(),
                GeoPlace {
                    name: p.name.clone(),
                    place_type: p.place_type.clone(),
                    editorial_summary: p.editorial_summary.clone(),
                    location: p.location,
                    distance: p.distance,
                    heading_offset: p.offset,
                    relative_position: p.position,
                },
            )
        })
        .collect();
    nearby.sort_by(|a, b| a.1.distance.total_cmp(&b.1.distance).then_with(|| a.0.cmp(b.0)));
    let a = &local.address;
    GeoContext {
        selected_place: selected.map(|p| p.display_name.clone()),
        closest_address: a.street_line(),
        heading: local.heading,
        neighborhood: a.neighborhood.clone(),
        city: a.city.clone(),
        state: a.state_province.clone(),
        country: a.country.clone(),
        nearby_places: nearby.into_iter().map(|(_, p)| p).collect(),
    }
}

fn side(p: RelativePosition) -> &'static str {
    match p {
        RelativePosition::InFront => "ahead",
        RelativePosition::ToYourLeft => "left",
        RelativePosition::ToYourRight => "right",
        RelativePosition::Behind => "behind",
    }
}

impl GeoContext {
    /// Plain-text block for prompts.
    pub fn to_prompt_text(&self) -> String {
        let mut s = String::new();
        if let Some(sel) = &self.selected_place {
            s.push_str(&format!("Searched destination: {sel}\n"));
        }
        s.push_str(&format!("Closest address: {}\n", self.closest_address));
        s.push_str(&format!("Facing: {} ({}°)\n", self.heading.name(), self.heading.degrees()));
        if let Some(n) = &self.neighborhood {
            s.push_str(&format!("Neighborhood: {n}\n"));
        }
        s.push_str(&format!("City: {}\n", self.city));
        if let Some(st) = &self.state {
            s.push_str(&format!("State or province: {st}\n"));
        }
        s.push_str(&format!("Country: {}\n", self.country));
        if self.nearby_places.is_empty() {
            s.push_str("Nearby places: none\n");
        } else {
            s.push_str("Nearby places (closest first):\n");
            for p in &self.nearby_places {
                s.push_str(&format!(
                    "- {} ({}), {:.0} m, {} ({:+.0}°)",
                    p.name,
                    p.place_type.replace('_', " "),
                    p.distance,
                    side(p.relative_position),
                    p.heading_offset
                ));
                if let Some(sum) = &p.editorial_summary {
                    s.push_str(&format!(": {sum}"));
                }
                s.push('\n');
            }
        }
        s
    }
}
