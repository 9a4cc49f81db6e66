use serde::{Deserialize, Serialize};

use crate::geo::{initial_bearing, relative_heading, GeoPoint, Heading, Octant, RelativePosition, ANGLE_EPSILON_DEG, DISTANCE_EPSILON_M};
use crate::nav::{current_intersection, IntersectionHit, NavConfig, NavError};
use crate::world::{MapProvider, Panorama, StreetAddress};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearbyPlace {
    pub place_id: String,
    pub name: String,
    pub place_type: String,
    pub editorial_summary: Option<String>,
    pub location: GeoPoint,
    pub distance: f64,
    /// Absolute bearing from the pano. A place on top of the pano gets the
    /// user's heading, so it reads as in front.
    pub bearing: Heading,
    /// Signed offset from the user's heading, positive clockwise.
    pub offset: f64,
    pub position: RelativePosition,
}

impl NearbyPlace {
    pub fn kind_label(&self) -> String {
        self.place_type.replace('_', " ")
    }

    pub fn compass(&self) -> Octant {
        self.bearing.snap()
    }
}

/// What the user can perceive at one pano and heading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalContext {
    pub pano_id: String,
    pub location: GeoPoint,
    pub address: StreetAddress,
    pub heading: Octant,
    pub at_intersection: Option<IntersectionHit>,
    /// Within `nearby_radius`, ordered front, left, right, behind, then by
    /// distance and id.
    pub nearby: Vec<NearbyPlace>,
}

pub fn build_local_context<M>(map: &M, pano: &Panorama, heading: Octant, cfg: &NavConfig) -> Result<LocalContext, NavError>
where
    M: MapProvider + ?Sized,
{
    let user = heading.heading();
    let mut nearby: Vec<NearbyPlace> = map
        .places_near(pano.location, cfg.nearby_radius)?
        .into_iter()
        .filter(|(p, _)| !p.is_address())
        .map(|(p, distance)| {
            let bearing = initial_bearing(pano.location, p.location).unwrap_or(user);
            let offset = relative_heading(bearing, user);
            NearbyPlace {
                place_id: p.id,
                name: p.display_name,
                place_type: p.place_type,
                editorial_summary: p.editorial_summary,
                location: p.location,
                distance,
                bearing,
                offset: offset.degrees(),
                position: offset.position(),
            }
        })
        .collect();
    sort_by_priority(&mut nearby);
    Ok(LocalContext {
        pano_id: pano.id.clone(),
        location: pano.location,
        address: pano.address.clone(),
        heading,
        at_intersection: current_intersection(map, pano, cfg)?,
        nearby,
    })
}

pub fn sort_by_priority(places: &mut [NearbyPlace]) {
    places.sort_by(|a, b| {
        a.position
            .priority()
            .cmp(&b.position.priority())
            .then(a.distance.total_cmp(&b.distance))
            .then_with(|| a.place_id.cmp(&b.place_id))
    });
}

impl LocalContext {
    /// Places inside the facing cone and distance cap, nearest first.
    pub fn facing(&self, cfg: &NavConfig) -> Vec<&NearbyPlace> {
        let mut out: Vec<&NearbyPlace> = self
            .nearby
            .iter()
            .filter(|p| {
                p.offset.abs() <= cfg.facing_cone + ANGLE_EPSILON_DEG && p.distance <= cfg.facing_max_distance + DISTANCE_EPSILON_M
            })
            .collect();
        out.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.place_id.cmp(&b.place_id)));
        out
    }

    /// Same pano seen from another heading; positions are recomputed.
    pub fn with_heading(&self, heading: Octant) -> LocalContext {
        let mut ctx = self.clone();
        ctx.heading = heading;
        for p in &mut ctx.nearby {
            let o = relative_heading(p.bearing, heading.heading());
            p.offset = o.degrees();
            p.position = o.position();
        }
        sort_by_priority(&mut ctx.nearby);
        ctx
    }
}
