use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{NavConfig, NavError};
use crate::geo::{haversine_distance, initial_bearing, relative_heading, GeoPoint, Heading, Octant, ANGLE_EPSILON_DEG};
use crate::world::{Panorama, PanoramaProvider};

/// A reachable panorama as seen from the graph origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub pano_id: String,
    pub distance: f64,
    /// Absolute bearing from the origin.
    pub bearing: Heading,
    pub road_name: String,
    /// Whether the origin carries a built-in link to this pano.
    pub linked: bool,
}

/// Per-position candidate set, built from a square spatial search merged
/// with the built-in links. Neighbors are ordered by (distance, id).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgocentricGraph {
    pub origin_pano_id: String,
    pub origin: GeoPoint,
    pub neighbors: Vec<Neighbor>,
}

pub fn build_egocentric_graph<M>(map: &M, origin: &Panorama, cfg: &NavConfig) -> Result<EgocentricGraph, NavError>
where
    M: PanoramaProvider + ?Sized,
{
    let mut found: BTreeMap<String, Neighbor> = BTreeMap::new();

    // One containment query is set-equivalent to point-sampling the square
    // every grid_step meters.
    for (pano, distance) in map.panos_in_grid(origin.location, cfg.grid_extent / 2.0)? {
        if pano.id == origin.id {
            continue;
        }
        // co-located panos have no bearing; only a link can give them one
        let Ok(bearing) = initial_bearing(origin.location, pano.location) else { continue };
        found.insert(
            pano.id.clone(),
            Neighbor { pano_id: pano.id, distance, bearing, road_name: pano.address.road_name, linked: false },
        );
    }

    for link in &origin.links {
        if let Some(existing) = found.get_mut(&link.target_id) {
            existing.linked = true;
            continue;
        }
        let target = map
            .panorama(&link.target_id)?
            .ok_or_else(|| NavError::UnknownPano(link.target_id.clone()))?;
        let bearing = initial_bearing(origin.location, target.location).unwrap_or(link.heading);
        found.insert(
            target.id.clone(),
            Neighbor {
                pano_id: target.id,
                distance: haversine_distance(origin.location, target.location),
                bearing,
                road_name: target.address.road_name,
                linked: true,
            },
        );
    }

    let mut neighbors: Vec<Neighbor> = found.into_values().collect();
    neighbors.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.pano_id.cmp(&b.pano_id)));
    Ok(EgocentricGraph { origin_pano_id: origin.id.clone(), origin: origin.location, neighbors })
}

fn within_tolerance(bearing: Heading, heading: Heading, cfg: &NavConfig) -> bool {
    relative_heading(bearing, heading).degrees().abs() <= cfg.forward_tolerance + ANGLE_EPSILON_DEG
}

impl EgocentricGraph {
    /// Closest neighbor within the forward tolerance of `heading`.
    pub fn next_pano(&self, heading: Heading, cfg: &NavConfig) -> Option<&Neighbor> {
        // neighbors are already (distance, id) ordered
        self.neighbors.iter().find(|n| within_tolerance(n.bearing, heading, cfg))
    }

    /// Same selection, looking opposite `heading`.
    pub fn prev_pano(&self, heading: Heading, cfg: &NavConfig) -> Option<&Neighbor> {
        self.next_pano(heading.opposite(), cfg)
    }

    /// Octants with a forward candidate, clockwise from North.
    pub fn available_movements(&self, cfg: &NavConfig) -> Vec<Octant> {
        Octant::ALL.into_iter().filter(|o| self.next_pano(o.heading(), cfg).is_some()).collect()
    }

    pub fn neighbor(&self, pano_id: &str) -> Option<&Neighbor> {
        self.neighbors.iter().find(|n| n.pano_id == pano_id)
    }
}

/// Octants reachable by following built-in links only.
pub fn link_movements(origin: &Panorama, cfg: &NavConfig) -> Vec<Octant> {
    Octant::ALL
        .into_iter()
        .filter(|o| origin.links.iter().any(|l| within_tolerance(l.heading, o.heading(), cfg)))
        .collect()
}
