use std::collections::HashMap;
use std::io::Read;

use super::index::SpatialIndex;
use super::{load_fixture, Panorama, Place, Road, ViewDescriptor, WorldError, WorldFixture};
use crate::geo::{haversine_distance, tangent_plane_offset, GeoPoint, Octant, DISTANCE_EPSILON_M};

/// A validated fixture with lookup tables and spatial indexes. Immutable
/// after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct World {
    fixture: WorldFixture,
    pano_by_id: HashMap<String, usize>,
    place_by_id: HashMap<String, usize>,
    pano_index: SpatialIndex,
    place_index: SpatialIndex,
}

impl World {
    pub fn new(fixture: WorldFixture) -> Result<World, WorldError> {
        fixture.validate()?;
        let pano_by_id = fixture.panos.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        let place_by_id = fixture.places.iter().enumerate().map(|(i, p)| (p.id.clone(), i)).collect();
        let pano_index = SpatialIndex::new(fixture.panos.iter().map(|p| p.location).collect());
        let place_index = SpatialIndex::new(fixture.places.iter().map(|p| p.location).collect());
        Ok(World { fixture, pano_by_id, place_by_id, pano_index, place_index })
    }

    pub fn load<R: Read>(source: R) -> Result<World, WorldError> {
        World::new(load_fixture(source)?)
    }

    pub fn fixture(&self) -> &WorldFixture {
        &self.fixture
    }

    pub fn panos(&self) -> &[Panorama] {
        &self.fixture.panos
    }

    pub fn places(&self) -> &[Place] {
        &self.fixture.places
    }

    pub fn roads(&self) -> &[Road] {
        &self.fixture.roads
    }

    pub fn pano(&self, id: &str) -> Option<&Panorama> {
        self.pano_by_id.get(id).map(|&i| &self.fixture.panos[i])
    }

    pub fn place(&self, id: &str) -> Option<&Place> {
        self.place_by_id.get(id).map(|&i| &self.fixture.places[i])
    }

    pub fn view(&self, pano_id: &str, heading: Octant) -> Option<&ViewDescriptor> {
        self.fixture.imagery.get(pano_id).and_then(|v| v.get(heading.index()))
    }

    pub fn views(&self, pano_id: &str) -> Option<&[ViewDescriptor]> {
        self.fixture.imagery.get(pano_id).map(Vec::as_slice)
    }

    /// Panoramas inside the square of half side `half_extent` around `center`,
    /// ordered by (distance, id).
    pub fn panos_in_grid(&self, center: GeoPoint, half_extent: f64) -> Vec<(&Panorama, f64)> {
        let mut hits: Vec<(&Panorama, f64)> = self
            .pano_index
            .in_square(center, half_extent)
            .into_iter()
            .map(|i| {
                let p = &self.fixture.panos[i];
                (p, haversine_distance(center, p.location))
            })
            .collect();
        hits.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.id.cmp(&b.0.id)));
        hits
    }

    /// Places with distance ≤ `radius`, ascending by distance then id.
    pub fn places_near(&self, origin: GeoPoint, radius: f64) -> Vec<(&Place, f64)> {
        let mut hits: Vec<(&Place, f64)> = self
            .place_index
            .in_square(origin, radius)
            .into_iter()
            .filter_map(|i| {
                let p = &self.fixture.places[i];
                let d = haversine_distance(origin, p.location);
                (d <= radius + DISTANCE_EPSILON_M).then_some((p, d))
            })
            .collect();
        hits.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.id.cmp(&b.0.id)));
        hits
    }

    /// Roads with at least one segment touching the square, in fixture order.
    pub fn roads_in_grid(&self, center: GeoPoint, half_extent: f64) -> Vec<&Road> {
        let reach = half_extent + DISTANCE_EPSILON_M;
        self.fixture
            .roads
            .iter()
            .filter(|road| {
                let pts: Vec<(f64, f64)> =
                    road.geometry.iter().map(|p| tangent_plane_offset(center, *p)).collect();
                pts.windows(2).any(|w| segment_touches_square(w[0], w[1], reach))
            })
            .collect()
    }

    /// Closest panorama; ties go to the lexicographically smaller id.
    pub fn nearest_pano(&self, p: GeoPoint) -> Result<(&Panorama, f64), WorldError> {
        self.fixture
            .panos
            .iter()
            .map(|pano| (pano, haversine_distance(p, pano.location)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.id.cmp(&b.0.id)))
            .ok_or_else(|| WorldError::NotFound("world has no panoramas".into()))
    }
}

/// Liang–Barsky clip of segment a→b against the square [-r, r]².
pub(crate) fn segment_touches_square(a: (f64, f64), b: (f64, f64), r: f64) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let checks = [(-dx, a.0 + r), (dx, r - a.0), (-dy, a.1 + r), (dy, r - a.1)];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}
