//! Spherical geometry and heading arithmetic.
//!
//! Everything here is a pure function over degrees. Radians only appear
//! inside the trig internals. The earth is modelled as a sphere with the
//! IUGG mean radius, which is plenty at street scale.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// IUGG mean earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Slack used for inclusive distance thresholds, in meters.
pub const DISTANCE_EPSILON_M: f64 = 1e-6;

/// Slack used for inclusive angular thresholds, in degrees.
pub const ANGLE_EPSILON_DEG: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("longitude {0} is not finite")]
    LongitudeNotFinite(f64),
    #[error("heading {0} is not finite")]
    HeadingNotFinite(f64),
    #[error("heading {0} outside [0, 360)")]
    HeadingOutOfRange(f64),
    #[error("bearing between coincident points is undefined")]
    CoincidentPoints,
}

/// A position on the sphere. `lng` is kept in the half-open interval (-180, 180].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct GeoPoint {
    lat: f64,
    lng: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    lat: f64,
    lng: f64,
}

impl TryFrom<RawPoint> for GeoPoint {
    type Error = GeoError;

    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        GeoPoint::new(raw.lat, raw.lng)
    }
}

impl From<GeoPoint> for RawPoint {
    fn from(p: GeoPoint) -> Self {
        RawPoint { lat: p.lat, lng: p.lng }
    }
}

impl GeoPoint {
    pub fn new(lat: f64, lng: f64) -> Result<Self, GeoError> {
        if !lat.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::LatitudeOutOfRange(lat));
        }
        if !lng.is_finite() {
            return Err(GeoError::LongitudeNotFinite(lng));
        }
        Ok(GeoPoint { lat, lng: normalize_longitude(lng) })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lng(&self) -> f64 {
        self.lng
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6},{:.6}", self.lat, self.lng)
    }
}

fn normalize_longitude(lng: f64) -> f64 {
    if lng > -180.0 && lng <= 180.0 {
        return lng;
    }
    let wrapped = (lng + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped <= -180.0 {
        wrapped + 360.0
    } else {
        wrapped
    }
}

/// An absolute compass heading in [0, 360).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Heading(f64);

impl Heading {
    pub const NORTH: Heading = Heading(0.0);

    /// Normalizes any finite angle into [0, 360).
    pub fn new(degrees: f64) -> Result<Self, GeoError> {
        if !degrees.is_finite() {
            return Err(GeoError::HeadingNotFinite(degrees));
        }
        Ok(Heading::wrap(degrees))
    }

    fn wrap(degrees: f64) -> Self {
        let d = degrees.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        Heading(if d >= 360.0 { 0.0 } else { d })
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    /// Rotates clockwise by `delta` degrees (negative rotates counter-clockwise).
    pub fn rotate(self, delta: f64) -> Heading {
        Heading::wrap(self.0 + delta)
    }

    pub fn opposite(self) -> Heading {
        self.rotate(180.0)
    }

    /// Nearest octant; exact ties go to the clockwise neighbour.
    pub fn snap(self) -> Octant {
        let idx = ((self.0 + 22.5) / 45.0).floor() as i64;
        Octant::from_index(idx.rem_euclid(8) as usize)
    }
}

impl TryFrom<f64> for Heading {
    type Error = GeoError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        if !value.is_finite() {
            return Err(GeoError::HeadingNotFinite(value));
        }
        if !(0.0..360.0).contains(&value) {
            // stored headings must already be normalized
            return Err(GeoError::HeadingOutOfRange(value));
        }
        Ok(Heading(value))
    }
}

impl From<Heading> for f64 {
    fn from(h: Heading) -> f64 {
        h.0
    }
}

impl From<Octant> for Heading {
    fn from(o: Octant) -> Heading {
        Heading(o.degrees())
    }
}

/// One of the eight 45°-spaced compass headings a session may face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Octant {
    North,
    Northeast,
    East,
    Southeast,
    South,
    Southwest,
    West,
    Northwest,
}

impl Octant {
    /// Clockwise from North.
    pub const ALL: [Octant; 8] = [
        Octant::North,
        Octant::Northeast,
        Octant::East,
        Octant::Southeast,
        Octant::South,
        Octant::Southwest,
        Octant::West,
        Octant::Northwest,
    ];

    pub fn from_index(idx: usize) -> Octant {
        Octant::ALL[idx % 8]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn degrees(self) -> f64 {
        self.index() as f64 * 45.0
    }

    pub fn heading(self) -> Heading {
        Heading::from(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Octant::North => "North",
            Octant::Northeast => "Northeast",
            Octant::East => "East",
            Octant::Southeast => "Southeast",
            Octant::South => "South",
            Octant::Southwest => "Southwest",
            Octant::West => "West",
            Octant::Northwest => "Northwest",
        }
    }

    /// Rotates by a whole number of octant steps, positive clockwise.
    pub fn turn(self, steps: i32) -> Octant {
        Octant::from_index((self.index() as i64 + steps as i64).rem_euclid(8) as usize)
    }

    pub fn opposite(self) -> Octant {
        self.turn(4)
    }
}

impl fmt::Display for Octant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cardinal or intercardinal label for any heading.
pub fn compass_name(h: Heading) -> &'static str {
    h.snap().name()
}

/// Signed angular offset in (-180, 180], positive clockwise.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RelativeOffset(f64);

impl RelativeOffset {
    /// Wraps any finite angle into (-180, 180].
    pub fn new(degrees: f64) -> RelativeOffset {
        let d = degrees.rem_euclid(360.0);
        RelativeOffset(if d > 180.0 { d - 360.0 } else { d })
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn position(self) -> RelativePosition {
        relative_position(self)
    }
}

/// Where something sits relative to the way the user is facing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelativePosition {
    InFront,
    ToYourRight,
    Behind,
    ToYourLeft,
}

impl RelativePosition {
    pub const ALL: [RelativePosition; 4] = [
        RelativePosition::InFront,
        RelativePosition::ToYourRight,
        RelativePosition::Behind,
        RelativePosition::ToYourLeft,
    ];

    /// Announcement priority: front, left, right, behind.
    pub fn priority(self) -> u8 {
        match self {
            RelativePosition::InFront => 0,
            RelativePosition::ToYourLeft => 1,
            RelativePosition::ToYourRight => 2,
            RelativePosition::Behind => 3,
        }
    }
}

pub fn haversine_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = phi2 - phi1;
    let dlambda = (b.lng - a.lng).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Forward azimuth of the great circle from `from` to `to`.
pub fn initial_bearing(from: GeoPoint, to: GeoPoint) -> Result<Heading, GeoError> {
    if from == to {
        return Err(GeoError::CoincidentPoints);
    }
    let phi1 = from.lat.to_radians();
    let phi2 = to.lat.to_radians();
    let dlambda = (to.lng - from.lng).to_radians();
    let y = dlambda.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dlambda.cos();
    if x == 0.0 && y == 0.0 {
        return Err(GeoError::CoincidentPoints);
    }
    Ok(Heading::wrap(y.atan2(x).to_degrees()))
}

/// Point reached by travelling `distance_m` along the great circle that
/// leaves `origin` at `bearing`.
pub fn destination_point(origin: GeoPoint, bearing: Heading, distance_m: f64) -> GeoPoint {
    let delta = distance_m / EARTH_RADIUS_M;
    let theta = bearing.degrees().to_radians();
    let phi1 = origin.lat.to_radians();
    let lambda1 = origin.lng.to_radians();
    let sin_phi2 = phi1.sin() * delta.cos() + phi1.cos() * delta.sin() * theta.cos();
    let phi2 = sin_phi2.clamp(-1.0, 1.0).asin();
    let y = theta.sin() * delta.sin() * phi1.cos();
    let x = delta.cos() - phi1.sin() * sin_phi2;
    let lambda2 = lambda1 + y.atan2(x);
    GeoPoint {
        lat: phi2.to_degrees().clamp(-90.0, 90.0),
        lng: normalize_longitude(lambda2.to_degrees()),
    }
}

pub fn relative_heading(target_bearing: Heading, user_heading: Heading) -> RelativeOffset {
    RelativeOffset::new(target_bearing.degrees() - user_heading.degrees())
}

/// Buckets an offset: front is |o| < 45, right is [45, 135), left is (-135, -45],
/// everything else is behind.
pub fn relative_position(o: RelativeOffset) -> RelativePosition {
    let d = o.degrees();
    if d.abs() < 45.0 {
        RelativePosition::InFront
    } else if (45.0..135.0).contains(&d) {
        RelativePosition::ToYourRight
    } else if d > -135.0 && d <= -45.0 {
        RelativePosition::ToYourLeft
    } else {
        RelativePosition::Behind
    }
}

/// Local equirectangular projection of `p` around `center`, in meters
/// (x east, y north).
pub fn tangent_plane_offset(center: GeoPoint, p: GeoPoint) -> (f64, f64) {
    let mut dlng = p.lng - center.lng;
    if dlng > 180.0 {
        dlng -= 360.0;
    } else if dlng < -180.0 {
        dlng += 360.0;
    }
    let x = dlng.to_radians() * center.lat.to_radians().cos() * EARTH_RADIUS_M;
    let y = (p.lat - center.lat).to_radians() * EARTH_RADIUS_M;
    (x, y)
}

/// Inverse of [`tangent_plane_offset`]: the point `east_m`/`north_m` away from
/// `center` in its local tangent plane.
pub fn offset_point(center: GeoPoint, east_m: f64, north_m: f64) -> GeoPoint {
    let lat = center.lat + (north_m / EARTH_RADIUS_M).to_degrees();
    let lng = center.lng + (east_m / (EARTH_RADIUS_M * center.lat.to_radians().cos())).to_degrees();
    GeoPoint { lat: lat.clamp(-90.0, 90.0), lng: normalize_longitude(lng) }
}
