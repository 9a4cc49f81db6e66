//! World data: panoramas, places and roads, the fixture document they are
//! loaded from, the provider interfaces that stand in for external map
//! services, and a location-keyed cache in front of those providers.

mod cache;
mod fixture;
mod index;
mod provider;
mod query;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{GeoPoint, Heading, Octant};

pub use cache::{CacheConfig, CacheKey, CachedMap, LocationCache, QueryKind};
pub use fixture::{load_fixture, SCHEMA_VERSION};
pub use provider::{
    MapProvider, PanoramaProvider, PlacesProvider, ProviderError, RoadsProvider, SearchHit,
    TextSearchProvider,
};
pub use query::World;

/// Default square size of a captured view, in pixels.
pub const DEFAULT_CAPTURE_SIZE: u32 = 640;

/// Place type used for geocoded street addresses. These are searchable
/// teleport targets but never announced as nearby places.
pub const ADDRESS_PLACE_TYPE: &str = "street_address";

#[derive(Debug, Error)]
pub enum WorldError {
    #[error("fixture parse error at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("fixture integrity error: {0}")]
    Integrity(String),
    #[error("unsupported fixture schema version {0}")]
    SchemaVersion(u32),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("fixture io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panorama {
    pub id: String,
    pub location: GeoPoint,
    #[serde(default)]
    pub links: Vec<PanoLink>,
    pub address: StreetAddress,
    pub capture_date: CaptureDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub photographer: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanoLink {
    pub target_id: String,
    pub heading: Heading,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Place {
    pub id: String,
    pub display_name: String,
    pub place_type: String,
    pub location: GeoPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub editorial_summary: Option<String>,
}

impl Place {
    pub fn is_address(&self) -> bool {
        self.place_type == ADDRESS_PLACE_TYPE
    }

    /// Human label for the place type, e.g. `performing_arts_theater` becomes
    /// `performing arts theater`.
    pub fn type_label(&self) -> String {
        self.place_type.replace('_', " ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Road {
    pub name: String,
    pub geometry: Vec<GeoPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreetAddress {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub street_number: Option<String>,
    pub road_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighborhood: Option<String>,
    pub city: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_province: Option<String>,
    pub country: String,
}

impl StreetAddress {
    /// "38 Bankside", or just the road name when there is no number.
    pub fn street_line(&self) -> String {
        match &self.street_number {
            Some(n) if !n.is_empty() => format!("{n} {}", self.road_name),
            _ => self.road_name.clone(),
        }
    }

    /// "London, England": the city followed by the state, or the country when
    /// there is no state.
    pub fn locality(&self) -> String {
        match &self.state_province {
            Some(s) if !s.is_empty() => format!("{}, {s}", self.city),
            _ => format!("{}, {}", self.city, self.country),
        }
    }

    pub fn same_locality(&self, other: &StreetAddress) -> bool {
        self.city == other.city
            && self.state_province == other.state_province
            && self.country == other.country
    }

    pub fn same_road(&self, other: &StreetAddress) -> bool {
        same_road_name(&self.road_name, &other.road_name)
    }
}

/// Road identity is case-insensitive name equality.
pub fn same_road_name(a: &str, b: &str) -> bool {
    a.trim().to_lowercase() == b.trim().to_lowercase()
}

/// Year and month a panorama was captured. Serialized as `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaptureDate {
    year: u16,
    month: u8,
}

const MONTH_NAMES: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

impl CaptureDate {
    pub fn new(year: u16, month: u8) -> Option<CaptureDate> {
        (1..=12).contains(&month).then_some(CaptureDate { year, month })
    }

    pub fn year(&self) -> u16 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    pub fn month_name(&self) -> &'static str {
        MONTH_NAMES[self.month as usize - 1]
    }
}

impl fmt::Display for CaptureDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for CaptureDate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (y, m) = s.split_once('-').ok_or_else(|| format!("expected YYYY-MM, got {s:?}"))?;
        if y.len() != 4 || m.len() != 2 {
            return Err(format!("expected YYYY-MM, got {s:?}"));
        }
        let year = y.parse::<u16>().map_err(|e| e.to_string())?;
        let month = m.parse::<u8>().map_err(|e| e.to_string())?;
        CaptureDate::new(year, month).ok_or_else(|| format!("month {month} out of range"))
    }
}

impl Serialize for CaptureDate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CaptureDate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One of the eight per-octant crops of a panorama, with the ground-truth
/// tags the mock model treats as what it "sees".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewDescriptor {
    pub image_ref: String,
    #[serde(default)]
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMeta {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Default for FixtureMeta {
    fn default() -> Self {
        FixtureMeta { schema_version: SCHEMA_VERSION, name: None }
    }
}

/// The self-contained synthetic world document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldFixture {
    pub meta: FixtureMeta,
    pub panos: Vec<Panorama>,
    #[serde(default)]
    pub places: Vec<Place>,
    #[serde(default)]
    pub roads: Vec<Road>,
    #[serde(default)]
    pub imagery: BTreeMap<String, Vec<ViewDescriptor>>,
}

/// A square crop of the current view handed to the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewCapture {
    pub pano_id: String,
    pub heading: Octant,
    pub width: u32,
    pub height: u32,
    pub image_ref: String,
}

impl ViewCapture {
    pub fn new(pano_id: &str, heading: Octant, size: u32, image_ref: String) -> ViewCapture {
        ViewCapture { pano_id: pano_id.to_string(), heading, width: size, height: size, image_ref }
    }
}
