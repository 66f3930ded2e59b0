//! Blocking client for the probe-inventory and measurement-results services.
//!
//! Remote payloads are adapted into the same values the file parsers produce,
//! so a fetch can be materialized to `probes.json` / `traceroutes.ndjson` and
//! the rest of the pipeline stays offline.

use std::collections::{HashMap, HashSet};
use std::net::IpAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, warn};
use serde_json::Value;
use thiserror::Error;
use url::Url;

use super::{probe_from_value, traceroute_from_value, IngestError};
use crate::model::{AsNumber, CountryCode, Probe, Traceroute};

pub const DEFAULT_RATE_LIMIT: f64 = 4.0;

type PageResult = Result<Vec<Traceroute>, FetchError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FetchError {
    #[error("GET {url} returned HTTP {status}")]
    Http { url: String, status: u16 },
    #[error("GET {url} failed: {reason}")]
    Transport { url: String, reason: String },
    #[error("pagination loop: {0} was already visited")]
    PaginationLoop(String),
    #[error("invalid URL {url}: {reason}")]
    BadUrl { url: String, reason: String },
    #[error("unexpected payload from {url}: {reason}")]
    Payload { url: String, reason: String },
    #[error("payload from {url}: {source}")]
    Record { url: String, source: IngestError },
    #[error("no measurement ids given")]
    NoMeasurementIds,
}

impl FetchError {
    pub fn status(&self) -> Option<u16> {
        match self {
            FetchError::Http { status, .. } => Some(*status),
            _ => None,
        }
    }
}

/// Spaces requests at least `1 / rate` seconds apart across all threads.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next_slot: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(requests_per_second: f64) -> Self {
        let interval = if requests_per_second > 0.0 && requests_per_second.is_finite() {
            Duration::from_secs_f64(1.0 / requests_per_second)
        } else {
            Duration::ZERO
        };
        Self {
            interval,
            next_slot: Mutex::new(None),
        }
    }

    /// Blocks until the caller may issue one request.
    pub fn acquire(&self) {
        let wait = {
            let mut slot = self.next_slot.lock().unwrap();
            let now = Instant::now();
            let start = slot.map_or(now, |s| s.max(now));
            *slot = Some(start + self.interval);
            start - now
        };
        if !wait.is_zero() {
            thread::sleep(wait);
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClientConfig {
    pub base_url: String,
    /// Requests per second, shared by all worker threads.
    pub rate_limit: f64,
    /// API key sent as `Authorization: Key <value>`.
    pub api_key: Option<String>,
    pub timeout: Duration,
    pub workers: usize,
}

impl ClientConfig {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            rate_limit: DEFAULT_RATE_LIMIT,
            api_key: None,
            timeout: Duration::from_secs(30),
            workers: 4,
        }
    }
}

/// Results of a multi-measurement fetch. Failures of individual ids do not
/// abort the others.
#[derive(Debug, Clone, Default)]
pub struct MeasurementFetch {
    pub traceroutes: Vec<Traceroute>,
    pub failures: Vec<(u64, FetchError)>,
}

pub struct AtlasClient {
    agent: ureq::Agent,
    base: Url,
    limiter: RateLimiter,
    api_key: Option<String>,
    workers: usize,
}

impl AtlasClient {
    pub fn new(config: &ClientConfig) -> Result<Self, FetchError> {
        // a trailing slash makes relative joins append rather than replace
        let mut base = config.base_url.clone();
        if !base.ends_with('/') {
            base.push('/');
        }
        let base = Url::parse(&base).map_err(|e| FetchError::BadUrl {
            url: config.base_url.clone(),
            reason: e.to_string(),
        })?;
        let agent = ureq::Agent::new_with_config(
            ureq::Agent::config_builder()
                .http_status_as_error(false)
                .timeout_global(Some(config.timeout))
                .build(),
        );
        Ok(Self {
            agent,
            base,
            limiter: RateLimiter::new(config.rate_limit),
            api_key: config.api_key.clone(),
            workers: config.workers.max(1),
        })
    }

    fn join(&self, path: &str) -> Result<Url, FetchError> {
        self.base.join(path).map_err(|e| FetchError::BadUrl {
            url: path.to_string(),
            reason: e.to_string(),
        })
    }

    fn get_json(&self, url: &Url) -> Result<Value, FetchError> {
        self.limiter.acquire();
        debug!("GET {url}");
        let mut req = self
            .agent
            .get(url.as_str())
            .header("Accept", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Key {key}"));
        }
        let transport = |e: ureq::Error| FetchError::Transport {
            url: url.to_string(),
            reason: e.to_string(),
        };
        let mut resp = req.call().map_err(transport)?;
        let status = resp.status().as_u16();
        if !(200..300).contains(&status) {
            return Err(FetchError::Http {
                url: url.to_string(),
                status,
            });
        }
        let body = resp.body_mut().read_to_string().map_err(transport)?;
        serde_json::from_str(&body).map_err(|e| FetchError::Payload {
            url: url.to_string(),
            reason: e.to_string(),
        })
    }

    /// Follows `next` links from `probes/` until exhausted. Any failed page
    /// fails the whole fetch.
    pub fn fetch_probe_inventory(
        &self,
        country: Option<CountryCode>,
    ) -> Result<Vec<Probe>, FetchError> {
        let mut url = self.join("probes/")?;
        if let Some(cc) = country {
            url.query_pairs_mut()
                .append_pair("country_code", cc.as_str());
        }
        let mut seen = HashSet::new();
        let mut probes = Vec::new();
        let mut next = Some(url);
        while let Some(page) = next.take() {
            if !seen.insert(page.to_string()) {
                return Err(FetchError::PaginationLoop(page.to_string()));
            }
            let doc = self.get_json(&page)?;
            let (results, next_link) = match &doc {
                Value::Array(items) => (items.as_slice(), None),
                Value::Object(o) => (
                    o.get("results")
                        .and_then(Value::as_array)
                        .map(Vec::as_slice)
                        .ok_or_else(|| FetchError::Payload {
                            url: page.to_string(),
                            reason: "missing `results` array".into(),
                        })?,
                    o.get("next").and_then(Value::as_str),
                ),
                _ => {
                    return Err(FetchError::Payload {
                        url: page.to_string(),
                        reason: "expected an object or array".into(),
                    })
                }
            };
            for item in results {
                probes.push(probe_from_value(item).map_err(|source| FetchError::Record {
                    url: page.to_string(),
                    source,
                })?);
            }
            if let Some(link) = next_link {
                next = Some(page.join(link).map_err(|e| FetchError::BadUrl {
                    url: link.to_string(),
                    reason: e.to_string(),
                })?);
            }
        }
        Ok(probes)
    }

    fn fetch_one_measurement(
        &self,
        id: u64,
        directory: Option<&ProbeDirectory>,
    ) -> Result<Vec<Traceroute>, FetchError> {
        let url = self.join(&format!("measurements/{id}/results/"))?;
        let doc = self.get_json(&url)?;
        let items = doc.as_array().ok_or_else(|| FetchError::Payload {
            url: url.to_string(),
            reason: "expected an array of results".into(),
        })?;
        items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let mut item = item.clone();
                if let Some(d) = directory {
                    d.annotate(&mut item);
                }
                traceroute_from_value(i as u64 + 1, item).map_err(|source| FetchError::Record {
                    url: url.to_string(),
                    source,
                })
            })
            .collect()
    }

    /// Fetches every id with up to `workers` requests in flight. Results keep
    /// the order of `ids`.
    pub fn fetch_measurement_results(&self, ids: &[u64]) -> Result<MeasurementFetch, FetchError> {
        self.fetch_results(ids, None)
    }

    /// Like [`AtlasClient::fetch_measurement_results`], for raw platform
    /// results that only carry `prb_id` and `dst_addr`: the destination probe
    /// and both AS numbers are looked up in `inventory`.
    pub fn fetch_measurement_results_annotated(
        &self,
        ids: &[u64],
        inventory: &[Probe],
    ) -> Result<MeasurementFetch, FetchError> {
        self.fetch_results(ids, Some(&ProbeDirectory::new(inventory)))
    }

    fn fetch_results(
        &self,
        ids: &[u64],
        directory: Option<&ProbeDirectory>,
    ) -> Result<MeasurementFetch, FetchError> {
        if ids.is_empty() {
            return Err(FetchError::NoMeasurementIds);
        }
        let cursor = AtomicUsize::new(0);
        let done: Mutex<Vec<(usize, PageResult)>> = Mutex::new(Vec::with_capacity(ids.len()));
        thread::scope(|s| {
            for _ in 0..self.workers.min(ids.len()) {
                s.spawn(|| loop {
                    let i = cursor.fetch_add(1, Ordering::Relaxed);
                    let Some(&id) = ids.get(i) else { break };
                    let result = self.fetch_one_measurement(id, directory);
                    done.lock().unwrap().push((i, result));
                });
            }
        });
        let mut done = done.into_inner().unwrap();
        done.sort_by_key(|(i, _)| *i);
        let mut out = MeasurementFetch::default();
        for (i, result) in done {
            match result {
                Ok(mut trs) => out.traceroutes.append(&mut trs),
                Err(e) => {
                    warn!("measurement {}: {e}", ids[i]);
                    out.failures.push((ids[i], e));
                }
            }
        }
        Ok(out)
    }
}

/// Probe id and address lookups used to annotate raw results.
struct ProbeDirectory {
    asn_by_id: HashMap<u64, AsNumber>,
    by_address: HashMap<IpAddr, (u64, AsNumber)>,
}

impl ProbeDirectory {
    fn new(probes: &[Probe]) -> Self {
        let mut asn_by_id = HashMap::new();
        let mut by_address = HashMap::new();
        for p in probes {
            let Some(asn) = p.asn_v4 else { continue };
            asn_by_id.insert(p.id, asn);
            if let Some(addr) = p.address_v4 {
                by_address.insert(IpAddr::V4(addr), (p.id, asn));
            }
        }
        ProbeDirectory {
            asn_by_id,
            by_address,
        }
    }

    /// Fills `dst_probe`, `src_asn` and `dst_asn` where absent. Fields that
    /// cannot be resolved stay absent and the record is rejected later.
    fn annotate(&self, item: &mut Value) {
        let Some(obj) = item.as_object_mut() else {
            return;
        };
        let src = obj
            .get("src_probe")
            .or_else(|| obj.get("prb_id"))
            .and_then(Value::as_u64);
        let dst = obj
            .get("dst_addr")
            .and_then(Value::as_str)
            .and_then(|a| a.parse::<IpAddr>().ok())
            .and_then(|a| self.by_address.get(&a).copied());
        if !obj.contains_key("src_asn") {
            if let Some(asn) = src.and_then(|id| self.asn_by_id.get(&id)) {
                obj.insert("src_asn".into(), asn.get().into());
            }
        }
        if let Some((id, asn)) = dst {
            obj.entry("dst_probe").or_insert(id.into());
            obj.entry("dst_asn").or_insert(asn.get().into());
        }
    }
}

/// One-shot inventory fetch with default client settings.
pub fn fetch_probe_inventory(
    base_url: &str,
    country: Option<CountryCode>,
) -> Result<Vec<Probe>, FetchError> {
    AtlasClient::new(&ClientConfig::new(base_url))?.fetch_probe_inventory(country)
}

/// One-shot results fetch with default client settings.
pub fn fetch_measurement_results(
    base_url: &str,
    ids: &[u64],
) -> Result<MeasurementFetch, FetchError> {
    AtlasClient::new(&ClientConfig::new(base_url))?.fetch_measurement_results(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_limiter_spaces_requests() {
        let limiter = RateLimiter::new(50.0);
        let start = Instant::now();
        for _ in 0..6 {
            limiter.acquire();
        }
        // first slot is immediate, the next five are 20 ms apart
        assert!(start.elapsed() >= Duration::from_millis(95));
    }

    #[test]
    fn zero_rate_means_unlimited() {
        let limiter = RateLimiter::new(0.0);
        let start = Instant::now();
        for _ in 0..100 {
            limiter.acquire();
        }
        assert!(start.elapsed() < Duration::from_millis(50));
    }

    #[test]
    fn empty_ids_rejected() {
        let client = AtlasClient::new(&ClientConfig::new("http://127.0.0.1:9/api")).unwrap();
        assert_eq!(
            client.fetch_measurement_results(&[]).unwrap_err(),
            FetchError::NoMeasurementIds
        );
    }
}
