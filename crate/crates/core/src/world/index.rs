use std::collections::HashMap;

use crate::geo::{tangent_plane_offset, GeoPoint, DISTANCE_EPSILON_M, EARTH_RADIUS_M};

/// Cell edge in degrees (roughly 55 m of latitude).
const CELL_DEG: f64 = 0.0005;

/// Past this many cells a query just scans everything.
const MAX_CELLS_PER_QUERY: i64 = 4096;

/// Uniform lat/lng bucket grid over a fixed set of points.
#[derive(Debug, Clone, Default)]
pub(crate) struct SpatialIndex {
    points: Vec<GeoPoint>,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

fn cell_of(lat: f64, lng: f64) -> (i64, i64) {
    ((lat / CELL_DEG).floor() as i64, (lng / CELL_DEG).floor() as i64)
}

impl SpatialIndex {
    pub(crate) fn new(points: Vec<GeoPoint>) -> SpatialIndex {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(cell_of(p.lat(), p.lng())).or_default().push(i);
        }
        SpatialIndex { points, cells }
    }

    /// Indices of points inside the tangent-plane square of half side
    /// `half_extent` around `center` (inclusive, unordered).
    pub(crate) fn in_square(&self, center: GeoPoint, half_extent: f64) -> Vec<usize> {
        let reach = half_extent + DISTANCE_EPSILON_M;
        let inside = |p: &GeoPoint| {
            let (x, y) = tangent_plane_offset(center, *p);
            x.abs() <= reach && y.abs() <= reach
        };

        let cos_lat = center.lat().to_radians().cos();
        let dlat = (reach * 1.01 / EARTH_RADIUS_M).to_degrees();
        let dlng = if cos_lat > 1e-6 { (reach * 1.01 / (EARTH_RADIUS_M * cos_lat)).to_degrees() } else { 360.0 };
        let (lat0, lng0) = cell_of(center.lat() - dlat, center.lng() - dlng);
        let (lat1, lng1) = cell_of(center.lat() + dlat, center.lng() + dlng);
        let crosses_antimeridian = center.lng() - dlng <= -180.0 || center.lng() + dlng > 180.0;
        let n_cells = (lat1 - lat0 + 1).saturating_mul(lng1 - lng0 + 1);

        if crosses_antimeridian || n_cells > MAX_CELLS_PER_QUERY {
            return (0..self.points.len()).filter(|&i| inside(&self.points[i])).collect();
        }

        let mut out = Vec::new();
        for ci in lat0..=lat1 {
            for cj in lng0..=lng1 {
                if let Some(bucket) = self.cells.get(&(ci, cj)) {
                    out.extend(bucket.iter().copied().filter(|&i| inside(&self.points[i])));
                }
            }
        }
        out
    }
}
