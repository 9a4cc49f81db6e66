//! Location-keyed LRU cache with single-flight fetches.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Condvar, Mutex};

use super::{MapProvider, Panorama, PanoramaProvider, Place, PlacesProvider, ProviderError, Road, RoadsProvider, SearchHit, TextSearchProvider, ViewDescriptor};
use crate::geo::{GeoPoint, Octant};

/// Quantization step for cache keys, in degrees (about 1.1 m).
pub const KEY_QUANTUM_DEG: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheConfig {
    pub capacity: usize,
    /// When set, provider failures are stored and replayed like successes.
    pub cache_failures: bool,
}

impl Default for CacheConfig {
    fn default() -> Self {
        CacheConfig { capacity: 4096, cache_failures: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryKind {
    PanosInGrid { half_extent_mm: u64 },
    PlacesNear { radius_mm: u64 },
    RoadsInGrid { half_extent_mm: u64 },
    NearestPano,
    Custom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    lat_q: i64,
    lng_q: i64,
    kind: QueryKind,
}

impl CacheKey {
    pub fn new(at: GeoPoint, kind: QueryKind) -> CacheKey {
        CacheKey {
            lat_q: (at.lat() / KEY_QUANTUM_DEG).round() as i64,
            lng_q: (at.lng() / KEY_QUANTUM_DEG).round() as i64,
            kind,
        }
    }
}

fn millimeters(m: f64) -> u64 {
    (m * 1000.0).round().max(0.0) as u64
}

struct Flight<V> {
    result: Mutex<Option<Result<V, ProviderError>>>,
    ready: Condvar,
}

struct Inner<V> {
    entries: HashMap<CacheKey, (Result<V, ProviderError>, u64)>,
    recency: BTreeMap<u64, CacheKey>,
    tick: u64,
    inflight: HashMap<CacheKey, Arc<Flight<V>>>,
    hits: u64,
    fetches: u64,
}

/// Bounded LRU keyed by quantized location and query kind. Concurrent
/// callers on the same missing key share one provider invocation.
pub struct LocationCache<V> {
    config: CacheConfig,
    inner: Mutex<Inner<V>>,
}

impl<V: Clone> LocationCache<V> {
    pub fn new(config: CacheConfig) -> LocationCache<V> {
        assert!(config.capacity > 0, "cache capacity must be positive");
        LocationCache {
            config,
            inner: Mutex::new(Inner {
                entries: HashMap::new(),
                recency: BTreeMap::new(),
                tick: 0,
                inflight: HashMap::new(),
                hits: 0,
                fetches: 0,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, key: &CacheKey) -> bool {
        self.inner.lock().unwrap().entries.contains_key(key)
    }

    pub fn hits(&self) -> u64 {
        self.inner.lock().unwrap().hits
    }

    /// Number of times the fetch closure actually ran.
    pub fn fetches(&self) -> u64 {
        self.inner.lock().unwrap().fetches
    }

    pub fn get_or_fetch<F>(&self, key: CacheKey, fetch: F) -> Result<V, ProviderError>
    where
        F: FnOnce() -> Result<V, ProviderError>,
    {
        let flight = {
            let mut inner = self.inner.lock().unwrap();
            if let Some(tick) = inner.entries.get(&key).map(|(_, t)| *t) {
                inner.tick += 1;
                let now = inner.tick;
                inner.recency.remove(&tick);
                inner.recency.insert(now, key.clone());
                inner.hits += 1;
                let entry = inner.entries.get_mut(&key).unwrap();
                entry.1 = now;
                return entry.0.clone();
            }
            if let Some(flight) = inner.inflight.get(&key).cloned() {
                inner.hits += 1;
                drop(inner);
                let mut slot = flight.result.lock().unwrap();
                while slot.is_none() {
                    slot = flight.ready.wait(slot).unwrap();
                }
                return slot.clone().unwrap();
            }
            let flight = Arc::new(Flight { result: Mutex::new(None), ready: Condvar::new() });
            inner.inflight.insert(key.clone(), flight.clone());
            inner.fetches += 1;
            flight
        };

        let result = fetch();

        {
            let mut inner = self.inner.lock().unwrap();
            inner.inflight.remove(&key);
            if result.is_ok() || self.config.cache_failures {
                inner.tick += 1;
                let now = inner.tick;
                inner.recency.insert(now, key.clone());
                inner.entries.insert(key, (result.clone(), now));
                while inner.entries.len() > self.config.capacity {
                    let (_, oldest) = inner.recency.pop_first().expect("recency tracks every entry");
                    inner.entries.remove(&oldest);
                }
            }
        }
        *flight.result.lock().unwrap() = Some(result.clone());
        flight.ready.notify_all();
        result
    }
}

/// Wraps any [`MapProvider`] with location-keyed caches for the spatial
/// queries. Id lookups and text search pass straight through.
pub struct CachedMap<M> {
    inner: M,
    panos: LocationCache<Vec<(Panorama, f64)>>,
    places: LocationCache<Vec<(Place, f64)>>,
    roads: LocationCache<Vec<Road>>,
    nearest: LocationCache<(Panorama, f64)>,
}

impl<M: MapProvider> CachedMap<M> {
    pub fn new(inner: M, config: CacheConfig) -> CachedMap<M> {
        CachedMap {
            inner,
            panos: LocationCache::new(config),
            places: LocationCache::new(config),
            roads: LocationCache::new(config),
            nearest: LocationCache::new(config),
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    /// Total provider invocations across all spatial caches.
    pub fn fetches(&self) -> u64 {
        self.panos.fetches() + self.places.fetches() + self.roads.fetches() + self.nearest.fetches()
    }
}

impl<M: MapProvider> PanoramaProvider for CachedMap<M> {
    fn panorama(&self, id: &str) -> Result<Option<Panorama>, ProviderError> {
        self.inner.panorama(id)
    }

    fn panos_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<(Panorama, f64)>, ProviderError> {
        let key = CacheKey::new(center, QueryKind::PanosInGrid { half_extent_mm: millimeters(half_extent) });
        self.panos.get_or_fetch(key, || self.inner.panos_in_grid(center, half_extent))
    }

    fn nearest_pano(&self, p: GeoPoint) -> Result<(Panorama, f64), ProviderError> {
        self.nearest.get_or_fetch(CacheKey::new(p, QueryKind::NearestPano), || self.inner.nearest_pano(p))
    }

    fn view(&self, pano_id: &str, heading: Octant) -> Result<Option<ViewDescriptor>, ProviderError> {
        self.inner.view(pano_id, heading)
    }
}

impl<M: MapProvider> PlacesProvider for CachedMap<M> {
    fn places_near(&self, origin: GeoPoint, radius: f64) -> Result<Vec<(Place, f64)>, ProviderError> {
        let key = CacheKey::new(origin, QueryKind::PlacesNear { radius_mm: millimeters(radius) });
        self.places.get_or_fetch(key, || self.inner.places_near(origin, radius))
    }

    fn place(&self, id: &str) -> Result<Option<Place>, ProviderError> {
        self.inner.place(id)
    }
}

impl<M: MapProvider> RoadsProvider for CachedMap<M> {
    fn roads_in_grid(&self, center: GeoPoint, half_extent: f64) -> Result<Vec<Road>, ProviderError> {
        let key = CacheKey::new(center, QueryKind::RoadsInGrid { half_extent_mm: millimeters(half_extent) });
        self.roads.get_or_fetch(key, || self.inner.roads_in_grid(center, half_extent))
    }
}

impl<M: MapProvider> TextSearchProvider for CachedMap<M> {
    fn search_text(&self, query: &str) -> Result<Vec<SearchHit>, ProviderError> {
        self.inner.search_text(query)
    }
}
