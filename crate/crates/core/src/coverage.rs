//! Dominant eyeball network selection and probe coverage statistics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::PopulationEstimateRow;
use crate::model::{
    AsNumber, CountryCode, EyeballNetwork, EyeballSet, GeoPoint, ModelError, Probe,
};

pub const DEFAULT_CUMULATIVE_CAP: f64 = 0.95;
pub const DEFAULT_PER_AS_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverageError {
    #[error("no population estimates given")]
    EmptyInput,
    #[error("population rows mix countries {0} and {1}")]
    MixedCountries(CountryCode, CountryCode),
    #[error("threshold {name} = {value} outside (0, 1]")]
    InvalidThreshold { name: &'static str, value: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Admission stops once the already-admitted share reaches this value.
    pub cumulative_cap: f64,
    /// Minimum share for a single network.
    pub per_as_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            cumulative_cap: DEFAULT_CUMULATIVE_CAP,
            per_as_floor: DEFAULT_PER_AS_FLOOR,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<(), CoverageError> {
        for (name, value) in [
            ("cumulative_cap", self.cumulative_cap),
            ("per_as_floor", self.per_as_floor),
        ] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(CoverageError::InvalidThreshold { name, value });
            }
        }
        Ok(())
    }
}

/// Picks the networks that together serve most of a country's users.
///
/// Candidates are visited in descending fraction order (ties by ascending
/// asn). A candidate is admitted while its own fraction is at least the floor
/// and the share admitted *before* it is still below the cap, so the network
/// that crosses the cap is kept. The first candidate under the floor ends
/// the scan.
pub fn select_dominant_networks(
    rows: &[PopulationEstimateRow],
    country_users: u64,
    capital: GeoPoint,
    thresholds: Thresholds,
) -> Result<EyeballSet, CoverageError> {
    thresholds.validate()?;
    let first = rows.first().ok_or(CoverageError::EmptyInput)?;
    let country = first.country;
    if let Some(other) = rows.iter().find(|r| r.country != country) {
        return Err(CoverageError::MixedCountries(country, other.country));
    }

    let mut candidates: Vec<(f64, AsNumber)> = rows.iter().map(|r| (r.fraction(), r.asn)).collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut admitted = Vec::new();
    let mut cumulative = 0.0;
    for (fraction, asn) in candidates {
        if fraction < thresholds.per_as_floor || cumulative >= thresholds.cumulative_cap {
            break;
        }
        admitted.push(EyeballNetwork::new(asn, country, fraction, country_users)?);
        cumulative += fraction;
    }
    Ok(EyeballSet::new(country, country_users, capital, admitted)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveredNetwork {
    pub asn: AsNumber,
    pub probe_count: usize,
    pub estimated_users: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncoveredNetwork {
    pub asn: AsNumber,
    pub estimated_users: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub country: CountryCode,
    pub eyeball_set: EyeballSet,
    pub covered_networks: Vec<CoveredNetwork>,
    pub uncovered_networks: Vec<UncoveredNetwork>,
    /// Sum of the user fractions of covered networks.
    pub covered_user_fraction: f64,
}

impl CoverageReport {
    pub fn is_covered(&self, asn: AsNumber) -> bool {
        self.covered_networks.iter().any(|n| n.asn == asn)
    }

    pub fn covered_users(&self) -> u64 {
        self.covered_networks
            .iter()
            .map(|n| n.estimated_users)
            .sum()
    }

    pub fn uncovered_users(&self) -> u64 {
        self.uncovered_networks
            .iter()
            .map(|n| n.estimated_users)
            .sum()
    }
}

/// A network is covered when at least one selectable IPv4 probe sits in it.
/// Probes registered in another country are ignored.
pub fn compute_probe_coverage(eyeball_set: &EyeballSet, probes: &[Probe]) -> CoverageReport {
    let country = eyeball_set.country();
    let mut covered_networks = Vec::new();
    let mut uncovered_networks = Vec::new();
    let mut covered_user_fraction = 0.0;
    for net in eyeball_set.networks() {
        let probe_count = probes
            .iter()
            .filter(|p| p.is_selectable() && p.is_in_country(country) && p.asn_v4 == Some(net.asn))
            .count();
        if probe_count > 0 {
            covered_user_fraction += net.user_fraction;
            covered_networks.push(CoveredNetwork {
                asn: net.asn,
                probe_count,
                estimated_users: net.estimated_users,
            });
        } else {
            uncovered_networks.push(UncoveredNetwork {
                asn: net.asn,
                estimated_users: net.estimated_users,
            });
        }
    }
    CoverageReport {
        country,
        eyeball_set: eyeball_set.clone(),
        covered_networks,
        uncovered_networks,
        covered_user_fraction,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldRow {
    pub country: CountryCode,
    pub covered_fraction: f64,
    /// 1..=5, one per fifth of `[0, 1]`.
    pub bucket: u8,
}

pub fn color_bucket(fraction: f64) -> u8 {
    1 + [0.2, 0.4, 0.6, 0.8]
        .iter()
        .filter(|&&edge| fraction >= edge)
        .count() as u8
}

/// One row per country, sorted by country code.
pub fn coverage_world_report(reports: &[CoverageReport]) -> Vec<WorldRow> {
    let mut rows: Vec<WorldRow> = reports
        .iter()
        .map(|r| WorldRow {
            country: r.country,
            covered_fraction: r.covered_user_fraction,
            bucket: color_bucket(r.covered_user_fraction),
        })
        .collect();
    rows.sort_by_key(|r| r.country);
    rows
}

pub fn write_world_csv(rows: &[WorldRow]) -> String {
    let mut out = String::from("country,covered_fraction,bucket\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.6},{}", r.country, r.covered_fraction, r.bucket);
    }
    out
}
