//! Synthetic worlds built from local east/north offsets.
//!
//! Tests, the acceptance suite and the gateway's builtin fixtures all come
//! from here, so the geometry of each scenario is pinned in one place.

use std::collections::BTreeMap;

use crate::geo::{initial_bearing, offset_point, GeoPoint, Heading, Octant};
use crate::world::{
    CaptureDate, FixtureMeta, PanoLink, Panorama, Place, Road, StreetAddress, ViewDescriptor, World, WorldFixture,
    ADDRESS_PLACE_TYPE,
};

#[derive(Debug, Clone)]
struct Locality {
    city: String,
    state: Option<String>,
    country: String,
    neighborhood: Option<String>,
}

pub struct FixtureBuilder {
    name: String,
    origin: GeoPoint,
    locality: Locality,
    capture_date: CaptureDate,
    photographer: Option<String>,
    panos: Vec<Panorama>,
    index: BTreeMap<String, usize>,
    places: Vec<Place>,
    roads: Vec<Road>,
    annotations: BTreeMap<(String, Octant), Vec<String>>,
}

impl FixtureBuilder {
    pub fn new(name: &str, origin: GeoPoint) -> FixtureBuilder {
        FixtureBuilder {
            name: name.to_string(),
            origin,
            locality: Locality { city: "Springfield".into(), state: None, country: "United States".into(), neighborhood: None },
            capture_date: CaptureDate::new(2024, 6).unwrap(),
            photographer: Some("Google".into()),
            panos: Vec::new(),
            index: BTreeMap::new(),
            places: Vec::new(),
            roads: Vec::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    pub fn at(&self, east: f64, north: f64) -> GeoPoint {
        offset_point(self.origin, east, north)
    }

    /// Locality applied to panos added from now on.
    pub fn locality(&mut self, city: &str, state: Option<&str>, country: &str) -> &mut Self {
        self.locality.city = city.into();
        self.locality.state = state.map(String::from);
        self.locality.country = country.into();
        self
    }

    pub fn neighborhood(&mut self, name: Option<&str>) -> &mut Self {
        self.locality.neighborhood = name.map(String::from);
        self
    }

    /// Capture metadata applied to panos added from now on.
    pub fn captured(&mut self, date: CaptureDate, photographer: Option<&str>) -> &mut Self {
        self.capture_date = date;
        self.photographer = photographer.map(String::from);
        self
    }

    pub fn pano(&mut self, id: &str, east: f64, north: f64, road: &str) -> &mut Self {
        let at = self.at(east, north);
        self.pano_at(id, at, road)
    }

    pub fn pano_at(&mut self, id: &str, location: GeoPoint, road: &str) -> &mut Self {
        assert!(!self.index.contains_key(id), "duplicate pano {id}");
        let address = StreetAddress {
            street_number: None,
            road_name: road.into(),
            neighborhood: self.locality.neighborhood.clone(),
            city: self.locality.city.clone(),
            state_province: self.locality.state.clone(),
            country: self.locality.country.clone(),
        };
        self.index.insert(id.to_string(), self.panos.len());
        self.panos.push(Panorama {
            id: id.into(),
            location,
            links: vec![],
            address,
            capture_date: self.capture_date,
            photographer: self.photographer.clone(),
        });
        self
    }

    pub fn has_pano(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// One-way link carrying the true bearing between the two panos.
    pub fn link(&mut self, from: &str, to: &str) -> &mut Self {
        let a = self.panos[self.index[from]].location;
        let b = self.panos[self.index[to]].location;
        let heading = initial_bearing(a, b).unwrap_or(Heading::NORTH);
        let links = &mut self.panos[self.index[from]].links;
        if !links.iter().any(|l| l.target_id == to) {
            links.push(PanoLink { target_id: to.into(), heading, description: String::new() });
        }
        self
    }

    pub fn link_both(&mut self, a: &str, b: &str) -> &mut Self {
        self.link(a, b).link(b, a)
    }

    /// Links consecutive ids both ways.
    pub fn chain(&mut self, ids: &[String]) -> &mut Self {
        for w in ids.windows(2) {
            self.link_both(&w[0], &w[1]);
        }
        self
    }

    pub fn place(&mut self, id: &str, name: &str, place_type: &str, east: f64, north: f64) -> &mut Self {
        let at = self.at(east, north);
        self.place_at(id, name, place_type, at)
    }

    pub fn place_at(&mut self, id: &str, name: &str, place_type: &str, location: GeoPoint) -> &mut Self {
        self.places.push(Place {
            id: id.into(),
            display_name: name.into(),
            place_type: place_type.into(),
            location,
            editorial_summary: None,
        });
        self
    }

    pub fn summary(&mut self, place_id: &str, text: &str) -> &mut Self {
        let place = self.places.iter_mut().find(|p| p.id == place_id).expect("unknown place");
        place.editorial_summary = Some(text.into());
        self
    }

    pub fn street_number(&mut self, pano_id: &str, number: &str) -> &mut Self {
        self.panos[self.index[pano_id]].address.street_number = Some(number.into());
        self
    }

    pub fn road(&mut self, name: &str, pts: &[(f64, f64)]) -> &mut Self {
        let geometry = pts.iter().map(|&(e, n)| self.at(e, n)).collect();
        self.roads.push(Road { name: name.into(), geometry });
        self
    }

    pub fn road_at(&mut self, name: &str, geometry: Vec<GeoPoint>) -> &mut Self {
        self.roads.push(Road { name: name.into(), geometry });
        self
    }

    pub fn annotate(&mut self, pano_id: &str, octant: Octant, tags: &[&str]) -> &mut Self {
        let entry = self.annotations.entry((pano_id.to_string(), octant)).or_default();
        for t in tags {
            if !entry.iter().any(|e| e == t) {
                entry.push(t.to_string());
            }
        }
        self
    }

    pub fn build(&self) -> WorldFixture {
        let imagery = self
            .panos
            .iter()
            .map(|p| {
                let views = Octant::ALL
                    .iter()
                    .map(|o| ViewDescriptor {
                        image_ref: format!("{}/{}", p.id, o.name().to_lowercase()),
                        annotations: self.annotations.get(&(p.id.clone(), *o)).cloned().unwrap_or_default(),
                    })
                    .collect();
                (p.id.clone(), views)
            })
            .collect();
        WorldFixture {
            meta: FixtureMeta { name: Some(self.name.clone()), ..FixtureMeta::default() },
            panos: self.panos.clone(),
            places: self.places.clone(),
            roads: self.roads.clone(),
            imagery,
        }
    }

    pub fn world(&self) -> World {
        World::new(self.build()).expect("synthetic fixture must validate")
    }
}

fn default_origin() -> GeoPoint {
    GeoPoint::new(40.7128, -74.0060).unwrap()
}

/// Built-in link layouts for the four-way crossing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourWayLinks {
    /// Center linked to all four arms.
    FullyLinked,
    /// Only the east and west arms are linked.
    EastWestOnly,
    /// Only the north and east arms are linked.
    TwoLinks,
}

pub const FOUR_WAY_ARM_M: f64 = 9.0;

/// A four-way crossing of Main Street (north–south) and Cross Street
/// (east–west). The center pano `c` has one pano on each arm at 9 m.
pub fn four_way(links: FourWayLinks) -> FixtureBuilder {
    let mut b = FixtureBuilder::new("four-way crossing", default_origin());
    b.road("Main Street", &[(0.0, -60.0), (0.0, 60.0)])
        .road("Cross Street", &[(-60.0, 0.0), (60.0, 0.0)])
        .pano("c", 0.0, 0.0, "Main Street")
        .pano("n", 0.0, FOUR_WAY_ARM_M, "Main Street")
        .pano("s", 0.0, -FOUR_WAY_ARM_M, "Main Street")
        .pano("e", FOUR_WAY_ARM_M, 0.0, "Cross Street")
        .pano("w", -FOUR_WAY_ARM_M, 0.0, "Cross Street");
    let arms: &[&str] = match links {
        FourWayLinks::FullyLinked => &["n", "e", "s", "w"],
        FourWayLinks::EastWestOnly => &["e", "w"],
        FourWayLinks::TwoLinks => &["n", "e"],
    };
    for arm in arms {
        b.link_both("c", arm);
    }
    b
}

pub const CROSSROADS_SPACING_M: f64 = 10.0;

/// Main Street runs north from `m0` with a pano every 10 m. Oak Avenue
/// crosses it `crossing_north` meters north of `m0`; the pano `x` sits on
/// the crossing, with Oak Avenue panos `oe1`, `oe2`, `ow1`, `ow2` at 9 and
/// 18 m either side. Main Street panos closer than 5 m to the crossing are
/// left out so `x` is the only pano there.
pub fn crossroads(crossing_north: f64) -> FixtureBuilder {
    let mut b = FixtureBuilder::new("crossroads", default_origin());
    b.road("Main Street", &[(0.0, -50.0), (0.0, 150.0)])
        .road("Oak Avenue", &[(-80.0, crossing_north), (80.0, crossing_north)]);
    let mut main: Vec<(f64, String)> = Vec::new();
    for k in -3..=12 {
        let north = k as f64 * CROSSROADS_SPACING_M;
        if (north - crossing_north).abs() < 5.0 {
            continue;
        }
        main.push((north, format!("m{k}")));
    }
    main.push((crossing_north, "x".into()));
    main.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (north, id) in &main {
        b.pano(id, 0.0, *north, "Main Street");
    }
    let ids: Vec<String> = main.into_iter().map(|(_, id)| id).collect();
    b.chain(&ids);
    for (id, east) in [("ow2", -18.0), ("ow1", -9.0), ("oe1", 9.0), ("oe2", 18.0)] {
        b.pano(id, east, crossing_north, "Oak Avenue");
    }
    b.chain(&["ow2".into(), "ow1".into(), "x".into(), "oe1".into(), "oe2".into()]);
    b
}

/// A single north-running road with `count` panos `r0..` every `spacing` m.
pub fn straight_road(count: usize, spacing: f64) -> FixtureBuilder {
    let mut b = FixtureBuilder::new("straight road", default_origin());
    let len = spacing * count as f64;
    b.road("Long Road", &[(0.0, -10.0), (0.0, len + 10.0)]);
    let ids: Vec<String> = (0..count).map(|i| format!("r{i}")).collect();
    for (i, id) in ids.iter().enumerate() {
        b.pano(id, 0.0, i as f64 * spacing, "Long Road");
    }
    b.chain(&ids);
    b
}

/// High Street runs north over River Road, which passes underneath 43 m
/// north of `h0`. High Street panos are 8 m apart. No pano sits on both roads and the two are never linked.
pub fn bridge() -> FixtureBuilder {
    let mut b = FixtureBuilder::new("bridge", default_origin());
    b.road("High Street", &[(0.0, -20.0), (0.0, 120.0)])
        .road("River Road", &[(-80.0, 43.0), (80.0, 43.0)]);
    let high: Vec<String> = (0..=12).map(|k| format!("h{k}")).collect();
    for (k, id) in high.iter().enumerate() {
        b.pano(id, 0.0, k as f64 * 8.0, "High Street");
    }
    b.chain(&high);
    let river: Vec<String> = (0..6).map(|k| format!("v{k}")).collect();
    for (k, id) in river.iter().enumerate() {
        b.pano(id, -25.0 + k as f64 * 10.0, 43.0, "River Road");
    }
    b.chain(&river);
    b
}

/// Layout of the synthetic grid city.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCity {
    /// North–south avenues, numbered west to east.
    pub avenues: usize,
    /// East–west streets, numbered south to north.
    pub streets: usize,
    /// Panos strictly between two crossings.
    pub block_panos: usize,
    /// Pano spacing along a road, meters.
    pub spacing: f64,
}

impl Default for GridCity {
    fn default() -> Self {
        GridCity { avenues: 50, streets: 50, block_panos: 2, spacing: 9.0 }
    }
}

const CITY_PLACE_TYPES: [&str; 6] = ["cafe", "pharmacy", "bakery", "library", "park", "bus_station"];
const CITY_TAGS: [&str; 8] = ["tree", "sidewalk", "crosswalk", "parked car", "bench", "street light", "fire hydrant", "trash can"];

impl GridCity {
    pub fn block_length(&self) -> f64 {
        self.spacing * (self.block_panos + 1) as f64
    }

    pub fn pano_count(&self) -> usize {
        let (a, s, b) = (self.avenues, self.streets, self.block_panos);
        a * s + a * s.saturating_sub(1) * b + s * a.saturating_sub(1) * b
    }

    pub fn avenue_name(i: usize) -> String {
        format!("Avenue {}", i + 1)
    }

    pub fn street_name(j: usize) -> String {
        format!("Street {}", j + 1)
    }

    /// Crossing pano id for avenue `i`, street `j`.
    pub fn crossing_id(i: usize, j: usize) -> String {
        format!("c{i}_{j}")
    }

    /// Every crossing sits on its avenue. Block panos are linked along their
    /// road; crossings with odd `i + j` drop their street-side links so the
    /// built-in network stays sparse the way real coverage is.
    pub fn build(&self) -> FixtureBuilder {
        let mut b = FixtureBuilder::new("grid city", default_origin());
        let l = self.block_length();
        let width = l * self.avenues.saturating_sub(1) as f64;
        let height = l * self.streets.saturating_sub(1) as f64;
        for i in 0..self.avenues {
            b.road(&Self::avenue_name(i), &[(i as f64 * l, -l / 2.0), (i as f64 * l, height + l / 2.0)]);
        }
        for j in 0..self.streets {
            b.road(&Self::street_name(j), &[(-l / 2.0, j as f64 * l), (width + l / 2.0, j as f64 * l)]);
        }
        for i in 0..self.avenues {
            for j in 0..self.streets {
                b.pano(&Self::crossing_id(i, j), i as f64 * l, j as f64 * l, &Self::avenue_name(i));
            }
        }
        // avenues: crossing, block panos, next crossing
        for i in 0..self.avenues {
            let mut ids = vec![Self::crossing_id(i, 0)];
            for j in 0..self.streets.saturating_sub(1) {
                for k in 1..=self.block_panos {
                    let id = format!("a{i}_{j}_{k}");
                    b.pano(&id, i as f64 * l, j as f64 * l + k as f64 * self.spacing, &Self::avenue_name(i));
                    ids.push(id);
                }
                ids.push(Self::crossing_id(i, j + 1));
            }
            b.chain(&ids);
        }
        for j in 0..self.streets {
            for i in 0..self.avenues.saturating_sub(1) {
                let mut ids = Vec::new();
                if (i + j) % 2 == 0 {
                    ids.push(Self::crossing_id(i, j));
                }
                for k in 1..=self.block_panos {
                    let id = format!("s{i}_{j}_{k}");
                    b.pano(&id, i as f64 * l + k as f64 * self.spacing, j as f64 * l, &Self::street_name(j));
                    ids.push(id);
                }
                if (i + 1 + j) % 2 == 0 {
                    ids.push(Self::crossing_id(i + 1, j));
                }
                b.chain(&ids);
            }
        }
        for i in 0..self.avenues.saturating_sub(1) {
            for j in 0..self.streets.saturating_sub(1) {
                let n = i * self.streets + j;
                let kind = CITY_PLACE_TYPES[n % CITY_PLACE_TYPES.len()];
                b.place(&format!("p{i}_{j}"), &format!("Block {} {}", i + 1, j + 1), kind, i as f64 * l + l / 2.0, j as f64 * l + l / 2.0);
            }
        }
        let ids: Vec<String> = b.panos.iter().map(|p| p.id.clone()).collect();
        for (n, id) in ids.iter().enumerate() {
            for (m, o) in Octant::ALL.into_iter().enumerate() {
                let tag = CITY_TAGS[(n * 3 + m * 5) % CITY_TAGS.len()];
                b.annotate(id, o, &[tag]);
            }
        }
        b
    }
}

/// Bankside pano `bankside` in London with four reachable neighbors and
/// four places within 50 m, plus an `acropolis` pano in Athens next to the
/// Acropolis. Teleporting to "38 Bankside" from Athens faces South.
pub fn bankside_and_acropolis() -> FixtureBuilder {
    let london = GeoPoint::new(51.5079, -0.0966).unwrap();
    let mut b = FixtureBuilder::new("bankside and acropolis", london);
    b.locality("London", Some("England"), "United Kingdom")
        .captured(CaptureDate::new(2025, 2).unwrap(), Some("Google"))
        .road("Bankside", &[(-120.0, 3.0), (120.0, 3.0)])
        .road("Emerson Street", &[(-20.0, 3.0), (-20.0, -80.0)]);
    let polar = |bearing: f64, d: f64| {
        let r = bearing.to_radians();
        (d * r.sin(), d * r.cos())
    };
    b.pano("bankside", 0.0, 0.0, "Bankside").street_number("bankside", "38");
    for (id, bearing, d) in [("bk-e", 90.0, 11.0), ("bk-s", 200.0, 12.0), ("bk-w", 270.0, 10.0), ("bk-nw", 315.0, 14.0)] {
        let (e, n) = polar(bearing, d);
        b.pano(id, e, n, "Bankside");
        b.link_both("bankside", id);
    }
    for (id, name, kind, bearing, d) in [
        ("addr-38", "38 Bankside", ADDRESS_PLACE_TYPE, 160.0, 5.0),
        ("globe", "Shakespeare's Globe", "performing_arts_theater", 182.0, 26.0),
        ("plaque", "Sam Wanamaker Plaque", "historical_landmark", 100.0, 41.0),
        ("ingresso", "Ingresso", "event_venue", 75.0, 46.4),
        ("garden", "Tate Community Garden", "garden", 262.0, 49.0),
        ("tate", "Tate Modern", "art_gallery", 250.0, 140.0),
    ] {
        let (e, n) = polar(bearing, d);
        b.place(id, name, kind, e, n);
    }
    b.summary("globe", "Reconstruction of the open-air Elizabethan playhouse.");

    let athens = GeoPoint::new(37.9715, 23.7267).unwrap();
    b.locality("Athens", None, "Greece")
        .captured(CaptureDate::new(2023, 9).unwrap(), None)
        .pano_at("acropolis", offset_point(athens, 0.0, -30.0), "Dionysiou Areopagitou")
        .pano_at("acropolis-w", offset_point(athens, -12.0, -30.0), "Dionysiou Areopagitou")
        .link_both("acropolis", "acropolis-w")
        .road_at("Dionysiou Areopagitou", vec![offset_point(athens, -200.0, -31.0), offset_point(athens, 200.0, -31.0)])
        .place_at("acropolis-site", "Acropolis of Athens", "historical_landmark", athens);
    b
}

pub const POI_TAGS: [&str; 14] = [
    "bench",
    "bus shelter",
    "bus stop sign",
    "trash can",
    "slide",
    "swing",
    "sandbox",
    "fence",
    "sidewalk",
    "parking lot",
    "bike rack",
    "outdoor seating",
    "entrance ramp",
    "crosswalk",
];

/// Three small scenes: a bus stop, a playground and a restaurant, each two
/// or three panos with fully annotated views.
pub fn poi_scenes() -> FixtureBuilder {
    let mut b = FixtureBuilder::new("poi scenes", GeoPoint::new(47.6097, -122.3331).unwrap());
    b.locality("Seattle", Some("Washington"), "United States");

    b.road("Pine Street", &[(-60.0, 0.0), (60.0, 0.0)])
        .pano("bus-1", 0.0, 0.0, "Pine Street")
        .pano("bus-2", 10.0, 0.0, "Pine Street")
        .link_both("bus-1", "bus-2")
        .place("bus-stop", "Pine St & 3rd Ave", "bus_station", 4.0, 6.0)
        .annotate("bus-1", Octant::North, &["bus shelter", "bench", "bus stop sign"])
        .annotate("bus-1", Octant::Northeast, &["bench", "trash can"])
        .annotate("bus-1", Octant::East, &["sidewalk"])
        .annotate("bus-1", Octant::South, &["crosswalk"])
        .annotate("bus-1", Octant::West, &["sidewalk", "trash can"])
        .annotate("bus-2", Octant::Northwest, &["bus shelter"])
        .annotate("bus-2", Octant::East, &["crosswalk", "sidewalk"]);

    b.road("Park Lane", &[(-60.0, 400.0), (60.0, 400.0)])
        .pano("play-1", 0.0, 400.0, "Park Lane")
        .pano("play-2", 10.0, 400.0, "Park Lane")
        .pano("play-3", 20.0, 400.0, "Park Lane")
        .chain(&["play-1".into(), "play-2".into(), "play-3".into()])
        .place("playground", "Cal Anderson Playground", "playground", 10.0, 420.0)
        .annotate("play-1", Octant::North, &["fence", "slide"])
        .annotate("play-1", Octant::Northeast, &["swing", "sandbox"])
        .annotate("play-1", Octant::West, &["bench"])
        .annotate("play-2", Octant::North, &["slide", "swing", "fence"])
        .annotate("play-2", Octant::South, &["parking lot"])
        .annotate("play-3", Octant::Northwest, &["sandbox", "bench"]);

    b.road("Olive Way", &[(-60.0, 800.0), (60.0, 800.0)])
        .pano("food-1", 0.0, 800.0, "Olive Way")
        .pano("food-2", 10.0, 800.0, "Olive Way")
        .link_both("food-1", "food-2")
        .place("restaurant", "Olive Way Diner", "restaurant", 5.0, 812.0)
        .annotate("food-1", Octant::North, &["entrance ramp", "outdoor seating"])
        .annotate("food-1", Octant::Northeast, &["bike rack"])
        .annotate("food-1", Octant::Southwest, &["parking lot"])
        .annotate("food-2", Octant::Northwest, &["outdoor seating", "bike rack"])
        .annotate("food-2", Octant::West, &["sidewalk"]);
    b
}

/// Builtin fixture by name, as accepted by `builtin:<name>` references.
pub fn builtin(name: &str) -> Option<World> {
    let b = match name {
        "bankside" => bankside_and_acropolis(),
        "crossroads" => crossroads(41.0),
        "bridge" => bridge(),
        "fourway" => four_way(FourWayLinks::EastWestOnly),
        "poi" => poi_scenes(),
        "straight" => straight_road(16, 9.5),
        "grid" => GridCity { avenues: 8, streets: 8, ..GridCity::default() }.build(),
        _ => return None,
    };
    Some(b.world())
}

pub const BUILTIN_NAMES: [&str; 7] = ["bankside", "crossroads", "bridge", "fourway", "poi", "straight", "grid"];

/// A sensible starting pano for each builtin fixture.
pub fn builtin_start(name: &str) -> Option<&'static str> {
    Some(match name {
        "bankside" => "acropolis",
        "crossroads" => "m0",
        "bridge" => "h0",
        "fourway" => "c",
        "poi" => "bus-1",
        "straight" => "r0",
        "grid" => "c0_0",
        _ => return None,
    })
}
