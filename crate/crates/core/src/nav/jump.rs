use serde::{Deserialize, Serialize};

use super::{build_egocentric_graph, NavConfig, NavError};
use crate::geo::{
    destination_point, haversine_distance, initial_bearing, relative_heading, tangent_plane_offset, GeoPoint, Heading,
    ANGLE_EPSILON_DEG, DISTANCE_EPSILON_M,
};
use crate::world::{same_road_name, MapProvider, Panorama, PanoramaProvider, Road};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionHit {
    pub location: GeoPoint,
    pub pano_id: String,
    /// Distinct (case-insensitive) road names found in the sample grid, sorted.
    pub road_names: Vec<String>,
    /// Distance along the ray to the sample point that found the hit.
    pub distance_from_origin: f64,
    /// 1-based index of that sample.
    pub sample_index: u32,
    /// Straight-line distance from the ray origin to the qualifying pano.
    pub pano_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JumpKind {
    ToIntersection,
    MaxDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpTarget {
    pub pano_id: String,
    pub kind: JumpKind,
    pub distance: f64,
    pub intersection: Option<IntersectionHit>,
}

fn distinct_road_names(roads: &[Road]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for road in roads {
        if !names.iter().any(|n| same_road_name(n, &road.name)) {
            names.push(road.name.clone());
        }
    }
    names.sort_by_key(|n| n.to_lowercase());
    names
}

/// Whether any egocentric neighbor of `pano` is addressed on a different road.
pub fn borders_other_road<M>(map: &M, pano: &Panorama, cfg: &NavConfig) -> Result<bool, NavError>
where
    M: PanoramaProvider + ?Sized,
{
    let graph = build_egocentric_graph(map, pano, cfg)?;
    Ok(graph.neighbors.iter().any(|n| !same_road_name(&n.road_name, &pano.address.road_name)))
}

/// Runs the grid test at one sample point: ≥2 distinct roads in the square
/// and a pano there whose neighbors span different roads. Among qualifying
/// panos the one closest to a road of another name wins, then the one
/// nearest the sample, then the smaller id.
fn junction_in_grid<M>(map: &M, center: GeoPoint, half_extent: f64, cfg: &NavConfig) -> Result<Option<(Panorama, Vec<String>)>, NavError>
where
    M: MapProvider + ?Sized,
{
    let roads = map.roads_in_grid(center, half_extent)?;
    let names = distinct_road_names(&roads);
    if names.len() < 2 {
        return Ok(None);
    }
    let mut best: Option<(Panorama, f64)> = None;
    // panos_in_grid is already ordered by distance to the sample, then id
    for (pano, _) in map.panos_in_grid(center, half_extent)? {
        if !borders_other_road(map, &pano, cfg)? {
            continue;
        }
        let gap = distance_to_other_road(&pano, &roads);
        if best.as_ref().is_none_or(|(_, g)| gap < *g - DISTANCE_EPSILON_M) {
            best = Some((pano, gap));
        }
    }
    Ok(best.map(|(p, _)| (p, names)))
}

fn distance_to_other_road(pano: &Panorama, roads: &[Road]) -> f64 {
    roads
        .iter()
        .filter(|r| !same_road_name(&r.name, &pano.address.road_name))
        .flat_map(|r| {
            let pts: Vec<(f64, f64)> = r.geometry.iter().map(|p| tangent_plane_offset(pano.location, *p)).collect();
            pts.windows(2).map(|w| distance_to_segment(w[0], w[1])).collect::<Vec<_>>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Distance from the origin to segment a→b.
fn distance_to_segment(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (-(a.0 * dx + a.1 * dy) / len2).clamp(0.0, 1.0) };
    (a.0 + t * dx).hypot(a.1 + t * dy)
}

/// Casts a ray from `origin` along `heading`, sampling every `ray_step`
/// meters (starting one step out) up to `jump_max`, and returns the first
/// sample whose grid holds an intersection.
pub fn detect_intersection_along<M>(map: &M, origin: GeoPoint, heading: Heading, cfg: &NavConfig) -> Result<Option<IntersectionHit>, NavError>
where
    M: MapProvider + ?Sized,
{
    let half = cfg.grid_extent / 2.0;
    let mut k: u32 = 1;
    loop {
        let along = k as f64 * cfg.ray_step;
        if along > cfg.jump_max + DISTANCE_EPSILON_M {
            return Ok(None);
        }
        let sample = destination_point(origin, heading, along);
        if let Some((pano, road_names)) = junction_in_grid(map, sample, half, cfg)? {
            return Ok(Some(IntersectionHit {
                location: pano.location,
                pano_distance: haversine_distance(origin, pano.location),
                pano_id: pano.id,
                road_names,
                distance_from_origin: along,
                sample_index: k,
            }));
        }
        k += 1;
    }
}

/// The intersection the pano itself sits on, if any, tested over the
/// smaller `intersection_extent` square.
pub fn current_intersection<M>(map: &M, pano: &Panorama, cfg: &NavConfig) -> Result<Option<IntersectionHit>, NavError>
where
    M: MapProvider + ?Sized,
{
    let names = distinct_road_names(&map.roads_in_grid(pano.location, cfg.intersection_extent / 2.0)?);
    if names.len() < 2 || !borders_other_road(map, pano, cfg)? {
        return Ok(None);
    }
    Ok(Some(IntersectionHit {
        location: pano.location,
        pano_id: pano.id.clone(),
        road_names: names,
        distance_from_origin: 0.0,
        sample_index: 0,
        pano_distance: 0.0,
    }))
}

/// Next intersection along `heading` or the farthest in-cone pano within
/// `jump_max`, whichever comes first.
pub fn jump_target<M>(map: &M, origin: &Panorama, heading: Heading, cfg: &NavConfig) -> Result<JumpTarget, NavError>
where
    M: MapProvider + ?Sized,
{
    if let Some(hit) = detect_intersection_along(map, origin.location, heading, cfg)? {
        if hit.pano_id != origin.id {
            return Ok(JumpTarget {
                pano_id: hit.pano_id.clone(),
                kind: JumpKind::ToIntersection,
                distance: hit.pano_distance,
                intersection: Some(hit),
            });
        }
    }

    let mut best: Option<(Panorama, f64)> = None;
    for (pano, distance) in map.panos_in_grid(origin.location, cfg.jump_max)? {
        if pano.id == origin.id || distance > cfg.jump_max + DISTANCE_EPSILON_M {
            continue;
        }
        let Ok(bearing) = initial_bearing(origin.location, pano.location) else { continue };
        if relative_heading(bearing, heading).degrees().abs() > cfg.forward_tolerance + ANGLE_EPSILON_DEG {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, bd)) => distance > *bd || (distance == *bd && pano.id < b.id),
        };
        if better {
            best = Some((pano, distance));
        }
    }
    best.map(|(pano, distance)| JumpTarget { pano_id: pano.id, kind: JumpKind::MaxDistance, distance, intersection: None })
        .ok_or(NavError::NoMovement)
}
