//! Interfaces for the map services the engine consumes.
//!
//! A live adapter implements these four traits against an external map
//! service. [`World`] implements all of them over a fixture and never fails.
//! Results are owned so adapters are free to build them per call.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Panorama, Place, Road, StreetAddress, ViewDescriptor, World};
use crate::geo::{GeoPoint, Octant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("provider unavailable: {0}")]
    Unavailable(String),
    #[error("provider timed out")]
    Timeout,
    #[error("not found: {0}")]
    NotFound(String),
}

pub trait PanoramaProvider {
    fn panorama(&self, id: &str) -> Result<Option<Panorama>, ProviderError>;
    /// Panoramas inside the tangent-plane square, ordered by (distance, id).
    fn panos_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<(Panorama, f64)>, ProviderError>;
    fn nearest_pano(&self, p: GeoPoint) -> Result<(Panorama, f64), ProviderError>;
    fn view(&self, pano_id: &str, heading: Octant) -> Result<Option<ViewDescriptor>, ProviderError>;
}

pub trait PlacesProvider {
    /// Places within `radius` (inclusive), ordered by (distance, id).
    fn places_near(&self, origin: GeoPoint, radius: f64) -> Result<Vec<(Place, f64)>, ProviderError>;
    fn place(&self, id: &str) -> Result<Option<Place>, ProviderError>;
}

pub trait RoadsProvider {
    fn roads_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<Road>, ProviderError>;
}

/// A resolved free-text search result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub place_id: Option<String>,
    pub display_name: String,
    pub place_type: Option<String>,
    pub location: GeoPoint,
    pub editorial_summary: Option<String>,
    pub address: Option<StreetAddress>,
}

pub trait TextSearchProvider {
    /// Best match first.
    fn search_text(&self, query: &str) -> Result<Vec<SearchHit>, ProviderError>;
}

/// Everything the engine needs from the outside world.
pub trait MapProvider: PanoramaProvider + PlacesProvider + RoadsProvider + TextSearchProvider + Send + Sync {}

impl<T> MapProvider for T where T: PanoramaProvider + PlacesProvider + RoadsProvider + TextSearchProvider + Send + Sync {}

impl PanoramaProvider for World {
    fn panorama(&self, id: &str) -> Result<Option<Panorama>, ProviderError> {
        Ok(self.pano(id).cloned())
    }

    fn panos_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<(Panorama, f64)>, ProviderError> {
        Ok(World::panos_in_grid(self, center, half_extent).into_iter().map(|(p, d)| (p.clone(), d)).collect())
    }

    fn nearest_pano(&self, p: GeoPoint) -> Result<(Panorama, f64), ProviderError> {
        World::nearest_pano(self, p)
            .map(|(pano, d)| (pano.clone(), d))
            .map_err(|e| ProviderError::NotFound(e.to_string()))
    }

    fn view(&self, pano_id: &str, heading: Octant) -> Result<Option<ViewDescriptor>, ProviderError> {
        Ok(World::view(self, pano_id, heading).cloned())
    }
}

impl PlacesProvider for World {
    fn places_near(&self, origin: GeoPoint, radius: f64) -> Result<Vec<(Place, f64)>, ProviderError> {
        Ok(World::places_near(self, origin, radius).into_iter().map(|(p, d)| (p.clone(), d)).collect())
    }

    fn place(&self, id: &str) -> Result<Option<Place>, ProviderError> {
        Ok(World::place(self, id).cloned())
    }
}

impl RoadsProvider for World {
    fn roads_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<Road>, ProviderError> {
        Ok(World::roads_in_grid(self, center, half_extent).into_iter().cloned().collect())
    }
}

impl TextSearchProvider for World {
    /// Coordinates (`lat, lng`) resolve directly. Otherwise places are ranked
    /// exact name match, then prefix, then substring, then by name and id.
    fn search_text(&self, query: &str) -> Result<Vec<SearchHit>, ProviderError> {
        let q = query.trim();
        if q.is_empty() {
            return Ok(vec![]);
        }
        if let Some(point) = parse_coordinates(q) {
            return Ok(vec![SearchHit {
                place_id: None,
                display_name: point.to_string(),
                place_type: None,
                location: point,
                editorial_summary: None,
                address: None,
            }]);
        }
        let needle = q.to_lowercase();
        let mut ranked: Vec<(u8, &Place)> = self
            .places()
            .iter()
            .filter_map(|p| {
                let name = p.display_name.to_lowercase();
                let rank = if name == needle {
                    0
                } else if name.starts_with(&needle) {
                    1
                } else if name.contains(&needle) {
                    2
                } else {
                    return None;
                };
                Some((rank, p))
            })
            .collect();
        ranked.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.display_name.cmp(&b.1.display_name)).then_with(|| a.1.id.cmp(&b.1.id)));
        Ok(ranked
            .into_iter()
            .map(|(_, p)| SearchHit {
                place_id: Some(p.id.clone()),
                display_name: p.display_name.clone(),
                place_type: Some(p.place_type.clone()),
                location: p.location,
                editorial_summary: p.editorial_summary.clone(),
                address: None,
            })
            .collect())
    }
}

fn parse_coordinates(q: &str) -> Option<GeoPoint> {
    let (a, b) = q.split_once(',')?;
    let lat = a.trim().parse::<f64>().ok()?;
    let lng = b.trim().parse::<f64>().ok()?;
    GeoPoint::new(lat, lng).ok()
}
