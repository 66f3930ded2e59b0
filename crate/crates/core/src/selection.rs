//! Per-network probe selection relative to the country's capital.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{AsNumber, CountryCode, EyeballSet, GeoPoint, Probe};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Great-circle distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat1, lat2) = (a.latitude().to_radians(), b.latitude().to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.longitude() - a.longitude()).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectedProbes {
    pub closest: Probe,
    pub farthest: Probe,
}

impl SelectedProbes {
    /// The distinct probes, closest first.
    pub fn distinct(&self) -> Vec<&Probe> {
        if self.closest.id == self.farthest.id {
            vec![&self.closest]
        } else {
            vec![&self.closest, &self.farthest]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSelection {
    pub country: CountryCode,
    pub per_asn: BTreeMap<AsNumber, SelectedProbes>,
}

impl ProbeSelection {
    pub fn get(&self, asn: AsNumber) -> Option<&SelectedProbes> {
        self.per_asn.get(&asn)
    }

    pub fn contains(&self, asn: AsNumber) -> bool {
        self.per_asn.contains_key(&asn)
    }
}

/// Row of `probes_<CC>.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionRow {
    pub asn: AsNumber,
    pub closest_probe: u64,
    pub farthest_probe: u64,
}

/// Selection rows in the member order of the eyeball set.
pub fn selection_rows(set: &EyeballSet, selection: &ProbeSelection) -> Vec<SelectionRow> {
    set.networks()
        .iter()
        .filter_map(|n| {
            selection.get(n.asn).map(|s| SelectionRow {
                asn: n.asn,
                closest_probe: s.closest.id,
                farthest_probe: s.farthest.id,
            })
        })
        .collect()
}

/// For every member network with at least one selectable in-country probe,
/// picks the probe nearest to the capital and the one farthest from it.
/// Equal distances resolve to the lower probe id in both roles.
pub fn select_probes(set: &EyeballSet, probes: &[Probe]) -> ProbeSelection {
    let capital = set.capital();
    let country = set.country();
    let mut per_asn = BTreeMap::new();
    for net in set.networks() {
        let candidates: Vec<(f64, &Probe)> = probes
            .iter()
            .filter(|p| p.is_selectable() && p.is_in_country(country) && p.asn_v4 == Some(net.asn))
            .map(|p| (haversine_km(capital, p.location.expect("selectable")), p))
            .collect();
        let by_distance_then_id =
            |a: &&(f64, &Probe), b: &&(f64, &Probe)| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id));
        let Some(closest) = candidates.iter().min_by(by_distance_then_id) else {
            continue;
        };
        let farthest = candidates
            .iter()
            .min_by(|a, b| match b.0.total_cmp(&a.0) {
                Ordering::Equal => a.1.id.cmp(&b.1.id),
                o => o,
            })
            .expect("non-empty");
        per_asn.insert(
            net.asn,
            SelectedProbes {
                closest: closest.1.clone(),
                farthest: farthest.1.clone(),
            },
        );
    }
    ProbeSelection { country, per_asn }
}
