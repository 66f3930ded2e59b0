//! Shared domain types.
//!
//! Everything here is plain data: immutable after construction, validated
//! at the constructor (or at deserialization via `try_from`), and free of I/O.

use std::collections::BTreeMap;
use std::fmt;
use std::net::{IpAddr, Ipv4Addr};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used when checking stored sums against recomputed ones.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid country code {0:?}: expected two uppercase letters")]
    InvalidCountry(String),
    #[error("invalid AS number {0}: must be in 1..=4294967295")]
    InvalidAsn(u64),
    #[error("cannot parse AS number from {0:?}")]
    UnparsableAsn(String),
    #[error("invalid coordinates ({lat}, {lon})")]
    InvalidGeoPoint { lat: f64, lon: f64 },
    #[error("user fraction {0} outside [0, 1]")]
    InvalidFraction(f64),
    #[error("networks are not ordered by descending fraction then ascending asn at AS{0}")]
    Unordered(AsNumber),
    #[error("duplicate network AS{0}")]
    DuplicateAsn(AsNumber),
    #[error("network AS{asn} belongs to {found}, not {expected}")]
    CountryMismatch {
        asn: AsNumber,
        expected: CountryCode,
        found: CountryCode,
    },
    #[error("covered fraction {stored} does not match member sum {computed}")]
    CoveredFractionMismatch { stored: f64, computed: f64 },
    #[error("matrix has {found} cells, expected {expected}")]
    CellCount { expected: usize, found: usize },
    #[error("matrix cell {index} is ({src}, {dst}), expected ({want_src}, {want_dst})")]
    CellOrder {
        index: usize,
        src: AsNumber,
        dst: AsNumber,
        want_src: AsNumber,
        want_dst: AsNumber,
    },
    #[error("hop indices must be positive and strictly increasing (saw {0})")]
    HopOrder(u32),
    #[error("negative rtt {0}")]
    NegativeRtt(f64),
    #[error("address family {af} does not match destination {addr}")]
    AddressFamily { af: u8, addr: IpAddr },
}

/// ISO 3166-1 alpha-2 code, always two uppercase ASCII letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CountryCode([u8; 2]);

impl CountryCode {
    pub fn new(code: &str) -> Result<Self, ModelError> {
        match code.as_bytes() {
            [a, b] if a.is_ascii_uppercase() && b.is_ascii_uppercase() => Ok(Self([*a, *b])),
            _ => Err(ModelError::InvalidCountry(code.to_string())),
        }
    }

    pub fn as_str(&self) -> &str {
        // both bytes are ASCII uppercase by construction
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CountryCode {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl TryFrom<String> for CountryCode {
    type Error = ModelError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::new(&s)
    }
}

impl From<CountryCode> for String {
    fn from(c: CountryCode) -> String {
        c.as_str().to_string()
    }
}

/// Autonomous System number; zero is reserved and rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct AsNumber(u32);

impl AsNumber {
    pub fn new(value: u64) -> Result<Self, ModelError> {
        match u32::try_from(value) {
            Ok(v) if v > 0 => Ok(Self(v)),
            _ => Err(ModelError::InvalidAsn(value)),
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AsNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for AsNumber {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let digits = s
            .strip_prefix("AS")
            .or_else(|| s.strip_prefix("as"))
            .unwrap_or(s);
        let value: u64 = digits
            .parse()
            .map_err(|_| ModelError::UnparsableAsn(s.to_string()))?;
        Self::new(value)
    }
}

impl TryFrom<u64> for AsNumber {
    type Error = ModelError;
    fn try_from(v: u64) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<AsNumber> for u32 {
    fn from(a: AsNumber) -> u32 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeoPoint")]
pub struct GeoPoint {
    latitude: f64,
    longitude: f64,
}

#[derive(Deserialize)]
struct RawGeoPoint {
    latitude: f64,
    longitude: f64,
}

impl TryFrom<RawGeoPoint> for GeoPoint {
    type Error = ModelError;
    fn try_from(r: RawGeoPoint) -> Result<Self, Self::Error> {
        Self::new(r.latitude, r.longitude)
    }
}

impl GeoPoint {
    pub fn new(latitude: f64, longitude: f64) -> Result<Self, ModelError> {
        if (-90.0..=90.0).contains(&latitude) && (-180.0..=180.0).contains(&longitude) {
            Ok(Self {
                latitude,
                longitude,
            })
        } else {
            Err(ModelError::InvalidGeoPoint {
                lat: latitude,
                lon: longitude,
            })
        }
    }

    pub fn latitude(&self) -> f64 {
        self.latitude
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }
}

/// One dominant user-facing network of a country.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EyeballNetwork {
    pub asn: AsNumber,
    pub country: CountryCode,
    pub user_fraction: f64,
    pub estimated_users: u64,
}

impl EyeballNetwork {
    /// `estimated_users` is derived as `floor(user_fraction * country_users)`.
    pub fn new(
        asn: AsNumber,
        country: CountryCode,
        user_fraction: f64,
        country_users: u64,
    ) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&user_fraction) {
            return Err(ModelError::InvalidFraction(user_fraction));
        }
        Ok(Self {
            asn,
            country,
            user_fraction,
            estimated_users: estimate_users(user_fraction, country_users),
        })
    }
}

pub fn estimate_users(fraction: f64, country_users: u64) -> u64 {
    (fraction * country_users as f64).floor() as u64
}

/// The per-country list of dominant eyeball networks.
///
/// Networks are kept in descending `user_fraction` order with ties broken by
/// ascending AS number; this order is also the row/column order of the matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEyeballSet")]
pub struct EyeballSet {
    country: CountryCode,
    country_users: u64,
    capital: GeoPoint,
    networks: Vec<EyeballNetwork>,
    covered_fraction: f64,
}

#[derive(Deserialize)]
struct RawEyeballSet {
    country: CountryCode,
    country_users: u64,
    capital: GeoPoint,
    networks: Vec<EyeballNetwork>,
    covered_fraction: f64,
}

impl TryFrom<RawEyeballSet> for EyeballSet {
    type Error = ModelError;
    fn try_from(r: RawEyeballSet) -> Result<Self, Self::Error> {
        let set = Self::new(r.country, r.country_users, r.capital, r.networks)?;
        if (set.covered_fraction - r.covered_fraction).abs() > SUM_TOLERANCE {
            return Err(ModelError::CoveredFractionMismatch {
                stored: r.covered_fraction,
                computed: set.covered_fraction,
            });
        }
        Ok(set)
    }
}

impl EyeballSet {
    pub fn new(
        country: CountryCode,
        country_users: u64,
        capital: GeoPoint,
        networks: Vec<EyeballNetwork>,
    ) -> Result<Self, ModelError> {
        for (i, n) in networks.iter().enumerate() {
            if !(0.0..=1.0).contains(&n.user_fraction) {
                return Err(ModelError::InvalidFraction(n.user_fraction));
            }
            if n.country != country {
                return Err(ModelError::CountryMismatch {
                    asn: n.asn,
                    expected: country,
                    found: n.country,
                });
            }
            if networks[..i].iter().any(|m| m.asn == n.asn) {
                return Err(ModelError::DuplicateAsn(n.asn));
            }
            if i > 0 && !ranks_before(&networks[i - 1], n) {
                return Err(ModelError::Unordered(n.asn));
            }
        }
        let covered_fraction = networks.iter().map(|n| n.user_fraction).sum();
        Ok(Self {
            country,
            country_users,
            capital,
            networks,
            covered_fraction,
        })
    }

    pub fn country(&self) -> CountryCode {
        self.country
    }

    pub fn country_users(&self) -> u64 {
        self.country_users
    }

    pub fn capital(&self) -> GeoPoint {
        self.capital
    }

    pub fn networks(&self) -> &[EyeballNetwork] {
        &self.networks
    }

    pub fn covered_fraction(&self) -> f64 {
        self.covered_fraction
    }

    pub fn len(&self) -> usize {
        self.networks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.networks.is_empty()
    }

    pub fn network(&self, asn: AsNumber) -> Option<&EyeballNetwork> {
        self.networks.iter().find(|n| n.asn == asn)
    }

    pub fn position(&self, asn: AsNumber) -> Option<usize> {
        self.networks.iter().position(|n| n.asn == asn)
    }
}

fn ranks_before(a: &EyeballNetwork, b: &EyeballNetwork) -> bool {
    a.user_fraction > b.user_fraction || (a.user_fraction == b.user_fraction && a.asn < b.asn)
}

/// A measurement vantage point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub id: u64,
    pub asn_v4: Option<AsNumber>,
    pub asn_v6: Option<AsNumber>,
    pub location: Option<GeoPoint>,
    pub address_v4: Option<Ipv4Addr>,
    pub is_public: bool,
    pub is_connected: bool,
    /// Country the probe is registered in, when the inventory provides it.
    pub country_code: Option<CountryCode>,
}

impl Probe {
    /// Public, connected, located, and carrying an IPv4 AS and address.
    pub fn is_selectable(&self) -> bool {
        self.is_public
            && self.is_connected
            && self.location.is_some()
            && self.asn_v4.is_some()
            && self.address_v4.is_some()
    }

    /// Probes without a registered country are assumed to be in `country`.
    pub fn is_in_country(&self, country: CountryCode) -> bool {
        self.country_code.is_none_or(|c| c == country)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HopResponse {
    Reply {
        from: IpAddr,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rtt: Option<f64>,
    },
    Timeout {
        x: String,
    },
}

impl HopResponse {
    pub fn timeout() -> Self {
        HopResponse::Timeout { x: "*".into() }
    }

    pub fn reply(from: IpAddr, rtt: f64) -> Self {
        HopResponse::Reply {
            from,
            rtt: Some(rtt),
        }
    }

    pub fn address(&self) -> Option<IpAddr> {
        match self {
            HopResponse::Reply { from, .. } => Some(*from),
            HopResponse::Timeout { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracerouteHop {
    pub hop: u32,
    #[serde(alias = "result")]
    pub results: Vec<HopResponse>,
}

impl TracerouteHop {
    /// Address of the first non-timeout response, if any.
    pub fn first_address(&self) -> Option<IpAddr> {
        self.results.iter().find_map(HopResponse::address)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Traceroute {
    pub src_probe: u64,
    pub dst_probe: u64,
    pub src_asn: AsNumber,
    pub dst_asn: AsNumber,
    pub dst_addr: IpAddr,
    pub af: u8,
    pub timestamp: u64,
    pub hops: Vec<TracerouteHop>,
}

impl Traceroute {
    /// Validates hop ordering and rtts; the address family follows `dst_addr`.
    pub fn new(
        src_probe: u64,
        dst_probe: u64,
        src_asn: AsNumber,
        dst_asn: AsNumber,
        dst_addr: IpAddr,
        timestamp: u64,
        hops: Vec<TracerouteHop>,
    ) -> Result<Self, ModelError> {
        let mut last = 0;
        for h in &hops {
            if h.hop <= last {
                return Err(ModelError::HopOrder(h.hop));
            }
            last = h.hop;
            for r in &h.results {
                if let HopResponse::Reply { rtt: Some(rtt), .. } = r {
                    if *rtt < 0.0 || rtt.is_nan() {
                        return Err(ModelError::NegativeRtt(*rtt));
                    }
                }
            }
        }
        let af = if dst_addr.is_ipv4() { 4 } else { 6 };
        Ok(Self {
            src_probe,
            dst_probe,
            src_asn,
            dst_asn,
            dst_addr,
            af,
            timestamp,
            hops,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locality {
    InCountry,
    OutOfCountry,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directness {
    Direct,
    Indirect,
    Undetermined,
}

/// Labels for a single traceroute. The two dimensions are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathClassification {
    pub locality: Locality,
    pub directness: Directness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalityVerdict {
    InCountry,
    OutOfCountry,
    Inconsistent,
    NoCoverage,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectnessVerdict {
    Direct,
    Indirect,
    Mixed,
    NotApplicable,
}

/// Identifies the traceroute a piece of evidence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MeasurementRef {
    pub src_probe: u64,
    pub dst_probe: u64,
    pub timestamp: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub measurement: MeasurementRef,
    pub classification: PathClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellVerdict {
    pub src_asn: AsNumber,
    pub dst_asn: AsNumber,
    pub locality: LocalityVerdict,
    pub directness: DirectnessVerdict,
    pub area_weight: f64,
    pub evidence: Vec<Evidence>,
}

impl CellVerdict {
    pub fn no_coverage(src_asn: AsNumber, dst_asn: AsNumber, area_weight: f64) -> Self {
        Self {
            src_asn,
            dst_asn,
            locality: LocalityVerdict::NoCoverage,
            directness: DirectnessVerdict::NotApplicable,
            area_weight,
            evidence: Vec::new(),
        }
    }
}

/// The AS-to-AS matrix: one cell per ordered pair of member networks,
/// stored row-major in the member order of the eyeball set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct EyeballMatrix {
    eyeball_set: EyeballSet,
    cells: Vec<CellVerdict>,
    /// Kept out of the serialized matrix so that identical inputs give
    /// identical files; written to a sidecar instead.
    #[serde(skip)]
    generated_at: u64,
}

#[derive(Deserialize)]
struct RawMatrix {
    eyeball_set: EyeballSet,
    cells: Vec<CellVerdict>,
}

impl TryFrom<RawMatrix> for EyeballMatrix {
    type Error = ModelError;
    fn try_from(r: RawMatrix) -> Result<Self, Self::Error> {
        Self::from_cells(r.eyeball_set, r.cells, 0)
    }
}

impl EyeballMatrix {
    /// Checks the cell count and row-major ordering against the eyeball set.
    pub fn from_cells(
        eyeball_set: EyeballSet,
        cells: Vec<CellVerdict>,
        generated_at: u64,
    ) -> Result<Self, ModelError> {
        let n = eyeball_set.len();
        if cells.len() != n * n {
            return Err(ModelError::CellCount {
                expected: n * n,
                found: cells.len(),
            });
        }
        let nets = eyeball_set.networks();
        for (index, cell) in cells.iter().enumerate() {
            let (want_src, want_dst) = (nets[index / n].asn, nets[index % n].asn);
            if cell.src_asn != want_src || cell.dst_asn != want_dst {
                return Err(ModelError::CellOrder {
                    index,
                    src: cell.src_asn,
                    dst: cell.dst_asn,
                    want_src,
                    want_dst,
                });
            }
        }
        Ok(Self {
            eyeball_set,
            cells,
            generated_at,
        })
    }

    pub fn eyeball_set(&self) -> &EyeballSet {
        &self.eyeball_set
    }

    pub fn cells(&self) -> &[CellVerdict] {
        &self.cells
    }

    pub fn size(&self) -> usize {
        self.eyeball_set.len()
    }

    pub fn generated_at(&self) -> u64 {
        self.generated_at
    }

    pub fn with_generated_at(mut self, ts: u64) -> Self {
        self.generated_at = ts;
        self
    }

    pub fn cell_at(&self, row: usize, col: usize) -> &CellVerdict {
        &self.cells[row * self.size() + col]
    }

    pub fn cell(&self, src: AsNumber, dst: AsNumber) -> Option<&CellVerdict> {
        let i = self.eyeball_set.position(src)?;
        let j = self.eyeball_set.position(dst)?;
        Some(self.cell_at(i, j))
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CellVerdict]> {
        self.cells.chunks(self.size().max(1))
    }

    pub fn cell_map(&self) -> BTreeMap<(AsNumber, AsNumber), &CellVerdict> {
        self.cells
            .iter()
            .map(|c| ((c.src_asn, c.dst_asn), c))
            .collect()
    }
}

/// Area fractions of the full user-pair square, which has area 1.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub in_country: f64,
    pub out_of_country: f64,
    pub no_coverage: f64,
    pub inconsistent: f64,
    pub undetermined: f64,
    pub unexamined: f64,
    /// Consensus-indirect cells only, relative to the full square.
    pub indirect: f64,
    /// Cells whose traceroutes disagree on directness.
    pub mixed: f64,
}

impl MetricsSummary {
    pub fn partition_total(&self) -> f64 {
        self.in_country
            + self.out_of_country
            + self.no_coverage
            + self.inconsistent
            + self.undetermined
            + self.unexamined
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(asn: u64, f: f64) -> EyeballNetwork {
        EyeballNetwork::new(
            AsNumber::new(asn).unwrap(),
            CountryCode::new("CA").unwrap(),
            f,
            1000,
        )
        .unwrap()
    }

    fn capital() -> GeoPoint {
        GeoPoint::new(45.4, -75.7).unwrap()
    }

    #[test]
    fn country_code_validation() {
        assert!(CountryCode::new("CA").is_ok());
        for bad in ["ca", "C", "CAN", "C1", "", "ÇA"] {
            assert!(CountryCode::new(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn asn_range() {
        assert!(AsNumber::new(0).is_err());
        assert!(AsNumber::new(4_294_967_295).is_ok());
        assert!(AsNumber::new(4_294_967_296).is_err());
        assert_eq!("AS812".parse::<AsNumber>().unwrap().get(), 812);
    }

    #[test]
    fn geo_point_ranges() {
        assert!(GeoPoint::new(90.0, 180.0).is_ok());
        assert!(GeoPoint::new(90.1, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.5).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn estimated_users_is_floored() {
        assert_eq!(net(1, 0.25).estimated_users, 250);
        assert_eq!(estimate_users(0.3333, 1000), 333);
    }

    #[test]
    fn eyeball_set_order_and_duplicates() {
        let cc = CountryCode::new("CA").unwrap();
        assert!(EyeballSet::new(cc, 1000, capital(), vec![net(2, 0.5), net(1, 0.3)]).is_ok());
        assert!(EyeballSet::new(cc, 1000, capital(), vec![net(1, 0.3), net(2, 0.5)]).is_err());
        // equal fractions must be in ascending asn order
        assert!(EyeballSet::new(cc, 1000, capital(), vec![net(1, 0.3), net(2, 0.3)]).is_ok());
        assert!(EyeballSet::new(cc, 1000, capital(), vec![net(2, 0.3), net(1, 0.3)]).is_err());
        assert!(matches!(
            EyeballSet::new(cc, 1000, capital(), vec![net(2, 0.3), net(2, 0.3)]),
            Err(ModelError::DuplicateAsn(_))
        ));
    }

    #[test]
    fn eyeball_set_round_trips_through_json() {
        let cc = CountryCode::new("CA").unwrap();
        let set = EyeballSet::new(cc, 1000, capital(), vec![net(7, 0.41), net(3, 0.17)]).unwrap();
        let text = serde_json::to_string(&set).unwrap();
        let back: EyeballSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn tampered_covered_fraction_is_rejected() {
        let cc = CountryCode::new("CA").unwrap();
        let set = EyeballSet::new(cc, 1000, capital(), vec![net(7, 0.41)]).unwrap();
        let text = serde_json::to_string(&set)
            .unwrap()
            .replace("\"covered_fraction\":0.41", "\"covered_fraction\":0.5");
        assert!(serde_json::from_str::<EyeballSet>(&text).is_err());
    }

    #[test]
    fn selectable_requires_every_field() {
        let p = Probe {
            id: 1,
            asn_v4: Some(AsNumber::new(812).unwrap()),
            asn_v6: None,
            location: Some(capital()),
            address_v4: Some("1.2.3.4".parse().unwrap()),
            is_public: true,
            is_connected: true,
            country_code: None,
        };
        assert!(p.is_selectable());
        assert!(!Probe {
            is_public: false,
            ..p.clone()
        }
        .is_selectable());
        assert!(!Probe {
            is_connected: false,
            ..p.clone()
        }
        .is_selectable());
        assert!(!Probe {
            location: None,
            ..p.clone()
        }
        .is_selectable());
        assert!(!Probe {
            asn_v4: None,
            ..p.clone()
        }
        .is_selectable());
        assert!(!Probe {
            address_v4: None,
            ..p
        }
        .is_selectable());
    }

    #[test]
    fn hop_order_enforced() {
        let a = AsNumber::new(1).unwrap();
        let hop = |i| TracerouteHop {
            hop: i,
            results: vec![HopResponse::timeout()],
        };
        let dst = "5.5.5.5".parse().unwrap();
        assert!(Traceroute::new(1, 2, a, a, dst, 0, vec![hop(1), hop(2)]).is_ok());
        assert!(Traceroute::new(1, 2, a, a, dst, 0, vec![hop(2), hop(1)]).is_err());
        assert!(Traceroute::new(1, 2, a, a, dst, 0, vec![hop(1), hop(1)]).is_err());
        assert!(Traceroute::new(1, 2, a, a, dst, 0, vec![hop(0)]).is_err());
    }

    #[test]
    fn matrix_requires_square_cell_count() {
        let cc = CountryCode::new("CA").unwrap();
        let set = EyeballSet::new(cc, 1000, capital(), vec![net(7, 0.5), net(3, 0.2)]).unwrap();
        let a = AsNumber::new(7).unwrap();
        let cells = vec![CellVerdict::no_coverage(a, a, 0.25)];
        assert!(matches!(
            EyeballMatrix::from_cells(set, cells, 0),
            Err(ModelError::CellCount {
                expected: 4,
                found: 1
            })
        ));
    }
}
