use std::collections::HashSet;
use std::io::Read;

use super::{WorldError, WorldFixture};

/// Current fixture schema version (`meta.schema_version`).
pub const SCHEMA_VERSION: u32 = 1;

/// Parses and validates a fixture document.
pub fn load_fixture<R: Read>(mut source: R) -> Result<WorldFixture, WorldError> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    WorldFixture::from_slice(&buf)
}

impl WorldFixture {
    pub fn from_slice(bytes: &[u8]) -> Result<WorldFixture, WorldError> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        let fixture: WorldFixture = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            WorldError::Parse { path, message: e.into_inner().to_string() }
        })?;
        fixture.validate()?;
        Ok(fixture)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serialization is infallible")
    }

    /// Checks every invariant eagerly; the first violation wins.
    pub fn validate(&self) -> Result<(), WorldError> {
        if self.meta.schema_version != SCHEMA_VERSION {
            return Err(WorldError::SchemaVersion(self.meta.schema_version));
        }

        let mut pano_ids = HashSet::with_capacity(self.panos.len());
        for pano in &self.panos {
            if pano.id.is_empty() {
                return Err(WorldError::Integrity("panorama with empty id".into()));
            }
            if !pano_ids.insert(pano.id.as_str()) {
                return Err(WorldError::Integrity(format!("duplicate panorama id {}", pano.id)));
            }
            if pano.address.road_name.trim().is_empty() {
                return Err(WorldError::Integrity(format!("panorama {} has an empty road name", pano.id)));
            }
            if pano.address.country.trim().is_empty() {
                return Err(WorldError::Integrity(format!("panorama {} has an empty country", pano.id)));
            }
        }
        for pano in &self.panos {
            for link in &pano.links {
                if !pano_ids.contains(link.target_id.as_str()) {
                    return Err(WorldError::Integrity(format!(
                        "panorama {} links to unknown panorama {}",
                        pano.id, link.target_id
                    )));
                }
                if link.target_id == pano.id {
                    return Err(WorldError::Integrity(format!("panorama {} links to itself", pano.id)));
                }
            }
        }

        let mut place_ids = HashSet::with_capacity(self.places.len());
        for place in &self.places {
            if !place_ids.insert(place.id.as_str()) {
                return Err(WorldError::Integrity(format!("duplicate place id {}", place.id)));
            }
            if place.display_name.trim().is_empty() {
                return Err(WorldError::Integrity(format!("place {} has an empty display name", place.id)));
            }
        }

        for road in &self.roads {
            if road.geometry.len() < 2 {
                return Err(WorldError::Integrity(format!("road {} has fewer than 2 vertices", road.name)));
            }
            if road.geometry.windows(2).any(|w| w[0] == w[1]) {
                return Err(WorldError::Integrity(format!("road {} repeats a vertex", road.name)));
            }
        }

        for (pano_id, views) in &self.imagery {
            if !pano_ids.contains(pano_id.as_str()) {
                return Err(WorldError::Integrity(format!("imagery for unknown panorama {pano_id}")));
            }
            if views.len() != 8 {
                return Err(WorldError::Integrity(format!(
                    "panorama {pano_id} has {} view descriptors, expected 8",
                    views.len()
                )));
            }
        }
        for pano in &self.panos {
            if !self.imagery.contains_key(&pano.id) {
                return Err(WorldError::Integrity(format!("panorama {} has no imagery", pano.id)));
            }
        }
        Ok(())
    }
}
