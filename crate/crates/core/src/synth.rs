//! Synthetic countries with known ground truth.
//!
//! A [`TopologySpec`] lists the eyeball networks of a country, the transit
//! networks available as intermediaries and, per ordered pair of eyeball
//! networks, whether paths leave the country and whether they cross a
//! transit. [`generate`] turns it into a complete [`Dataset`] (population
//! estimates, probes, traceroutes, prefix and geolocation tables) and keeps a
//! [`RouteTruth`] for every traceroute describing what each hop really is.
//!
//! Address plan: the `k`-th network owns a /16 out of a fixed list of public
//! /8 blocks. Inside it, the first /18 is geolocated at home, the second
//! abroad, the third is explicitly unknown (`??`) and the fourth has no
//! geolocation entry at all. Hops that belong to no announced prefix come
//! from 2.0.0.0/8, which is split the same way in /10 steps.

use std::collections::{BTreeMap, HashMap};
use std::net::{IpAddr, Ipv4Addr};

use ipnet::{IpNet, Ipv4Net};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::{select_dominant_networks, Thresholds};
use crate::ingest::PopulationEstimateRow;
use crate::lpm::{GeoLabel, GeoTable, PrefixTable};
use crate::model::{
    AsNumber, CountryCode, GeoPoint, HopResponse, Probe, Traceroute, TracerouteHop,
};
use crate::pipeline::Dataset;
use crate::plan::build_plan;
use crate::selection::select_probes;

const NETWORK_OCTETS: [u8; 20] = [
    5, 24, 31, 37, 46, 62, 77, 80, 81, 82, 83, 84, 85, 86, 87, 88, 89, 90, 91, 92,
];
const UNMAPPED_OCTET: u8 = 2;
const FIRST_PROBE_ID: u64 = 1001;
/// 2017-04-01T00:00:00Z
const BASE_TIMESTAMP: u64 = 1_491_004_800;

/// How often a property holds for the routes of one AS pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exposure {
    Never,
    Always,
    /// Every other route of the pair, starting with the first.
    Alternating,
}

impl Exposure {
    fn applies(self, ordinal: usize) -> bool {
        match self {
            Exposure::Never => false,
            Exposure::Always => true,
            Exposure::Alternating => ordinal.is_multiple_of(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairPolicy {
    pub abroad: Exposure,
    pub transit: Exposure,
}

impl Default for PairPolicy {
    fn default() -> Self {
        PairPolicy {
            abroad: Exposure::Never,
            transit: Exposure::Never,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopLocation {
    Home,
    Abroad,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopKind {
    /// Public address inside the network's announced prefix.
    Mapped(AsNumber),
    /// Public address outside every announced prefix.
    UnmappedPublic,
    /// Private or otherwise special-purpose address.
    Private,
    /// No reply at all.
    Timeout,
}

/// What the first reply of a hop really is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopTruth {
    pub kind: HopKind,
    pub location: HopLocation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteTruth {
    pub src_probe: u64,
    pub dst_probe: u64,
    pub src_asn: AsNumber,
    pub dst_asn: AsNumber,
    pub hops: Vec<HopTruth>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EyeballSpec {
    pub asn: AsNumber,
    pub fraction_percent: f64,
    /// Selectable probes to place in the network.
    pub probes: usize,
}

/// Probabilities of the imperfections added to routes and inventories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    /// A hop that does not answer.
    pub timeout: f64,
    /// A home-router hop with a private address at the start.
    pub private: f64,
    /// An unannounced public address at an AS boundary.
    pub unmapped: f64,
    /// A hop whose address cannot be geolocated.
    pub unknown_geo: f64,
    /// The first of the three replies of a hop times out.
    pub leading_timeout: f64,
    /// A later reply of a hop comes from a different router.
    pub second_router: f64,
    /// The destination never answers.
    pub truncated: f64,
    /// Per network, an extra probe that must not be selected, plus a
    /// traceroute from it.
    pub stray_probe: f64,
}

impl Noise {
    pub fn none() -> Self {
        Noise {
            timeout: 0.0,
            private: 0.0,
            unmapped: 0.0,
            unknown_geo: 0.0,
            leading_timeout: 0.0,
            second_router: 0.0,
            truncated: 0.0,
            stray_probe: 0.0,
        }
    }
}

impl Default for Noise {
    fn default() -> Self {
        Noise {
            timeout: 0.1,
            private: 0.3,
            unmapped: 0.15,
            unknown_geo: 0.15,
            leading_timeout: 0.2,
            second_router: 0.1,
            truncated: 0.1,
            stray_probe: 0.3,
        }
    }
}

/// Which probe pairs get a traceroute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceScope {
    /// Only the tasks of the measurement plan.
    Plan,
    /// Every ordered pair of distinct selectable probes in eyeball networks.
    AllPairs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologySpec {
    pub country: CountryCode,
    /// Where "abroad" hops are geolocated.
    pub foreign: CountryCode,
    pub users: u64,
    pub capital: GeoPoint,
    pub eyeballs: Vec<EyeballSpec>,
    pub transits: Vec<AsNumber>,
    /// Missing pairs stay at home and direct.
    pub policies: BTreeMap<(AsNumber, AsNumber), PairPolicy>,
    pub noise: Noise,
    pub scope: TraceScope,
    /// Used to derive the plan when `scope` is [`TraceScope::Plan`].
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone)]
pub struct SyntheticCountry {
    pub dataset: Dataset,
    /// One entry per traceroute, in the same order.
    pub routes: Vec<RouteTruth>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Owner {
    Network(usize),
    Unmapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Zone {
    Home,
    Abroad,
    Unknown,
    Unlisted,
}

const ZONES: [Zone; 4] = [Zone::Home, Zone::Abroad, Zone::Unknown, Zone::Unlisted];

impl Zone {
    fn location(self) -> HopLocation {
        match self {
            Zone::Home => HopLocation::Home,
            Zone::Abroad => HopLocation::Abroad,
            Zone::Unknown | Zone::Unlisted => HopLocation::Unknown,
        }
    }
}

fn owner_net(owner: Owner) -> Ipv4Net {
    match owner {
        Owner::Network(k) => {
            let octet = NETWORK_OCTETS[k / 256];
            Ipv4Net::new(Ipv4Addr::new(octet, (k % 256) as u8, 0, 0), 16).unwrap()
        }
        Owner::Unmapped => Ipv4Net::new(Ipv4Addr::new(UNMAPPED_OCTET, 0, 0, 0), 8).unwrap(),
    }
}

fn zone_net(owner: Owner, zone: Zone) -> Ipv4Net {
    let net = owner_net(owner);
    let len = net.prefix_len() + 2;
    let size = 1u32 << (32 - len);
    let index = ZONES.iter().position(|z| *z == zone).unwrap() as u32;
    Ipv4Net::new(Ipv4Addr::from(u32::from(net.network()) + index * size), len).unwrap()
}

struct Generator<'a> {
    spec: &'a TopologySpec,
    rng: ChaCha8Rng,
    next_host: HashMap<(Owner, Zone), u32>,
    /// Network index of every AS: eyeballs first, then transits.
    index: HashMap<AsNumber, usize>,
}

struct PlannedHop {
    owner: Option<Owner>,
    zone: Zone,
    /// Fixed address (the destination probe).
    address: Option<Ipv4Addr>,
    /// Exempt from noise, because it carries the policy's signal.
    key: bool,
}

impl PlannedHop {
    fn at(owner: Owner, zone: Zone) -> Self {
        PlannedHop {
            owner: Some(owner),
            zone,
            address: None,
            key: false,
        }
    }
}

impl Generator<'_> {
    fn asn_of(&self, owner: Owner) -> Option<AsNumber> {
        match owner {
            Owner::Network(k) if k < self.spec.eyeballs.len() => Some(self.spec.eyeballs[k].asn),
            Owner::Network(k) => Some(self.spec.transits[k - self.spec.eyeballs.len()]),
            Owner::Unmapped => None,
        }
    }

    fn allocate(&mut self, owner: Owner, zone: Zone) -> Ipv4Addr {
        let net = zone_net(owner, zone);
        let n = self.next_host.entry((owner, zone)).or_insert(0);
        *n += 1;
        assert!(
            *n < (1 << (32 - net.prefix_len())) - 1,
            "address block exhausted"
        );
        Ipv4Addr::from(u32::from(net.network()) + *n)
    }

    fn tables(&self) -> (PrefixTable, GeoTable) {
        let count = self.spec.eyeballs.len() + self.spec.transits.len();
        let mut prefixes = PrefixTable::new();
        let mut geo = GeoTable::new();
        let owners = (0..count).map(Owner::Network).chain([Owner::Unmapped]);
        for owner in owners {
            if let Some(asn) = self.asn_of(owner) {
                prefixes.insert(IpNet::V4(owner_net(owner)), asn);
            }
            geo.insert(
                IpNet::V4(zone_net(owner, Zone::Home)),
                GeoLabel::Country(self.spec.country),
            );
            geo.insert(
                IpNet::V4(zone_net(owner, Zone::Abroad)),
                GeoLabel::Country(self.spec.foreign),
            );
            geo.insert(IpNet::V4(zone_net(owner, Zone::Unknown)), GeoLabel::Unknown);
        }
        (prefixes, geo)
    }

    fn probe_location(&mut self) -> GeoPoint {
        let c = self.spec.capital;
        let lat = (c.latitude() + self.rng.random_range(-4.0..4.0)).clamp(-89.0, 89.0);
        let mut lon = c.longitude() + self.rng.random_range(-8.0..8.0);
        if lon > 180.0 {
            lon -= 360.0;
        } else if lon < -180.0 {
            lon += 360.0;
        }
        let round = |x: f64| (x * 1e4).round() / 1e4;
        GeoPoint::new(round(lat), round(lon)).unwrap()
    }

    /// Selectable probes per eyeball network, then stray ones.
    fn probes(&mut self) -> (Vec<Probe>, Vec<Probe>) {
        let mut id = FIRST_PROBE_ID;
        let mut good = Vec::new();
        let mut stray = Vec::new();
        for k in 0..self.spec.eyeballs.len() {
            let asn = self.spec.eyeballs[k].asn;
            for _ in 0..self.spec.eyeballs[k].probes {
                let country_code = if self.rng.random_bool(0.8) {
                    Some(self.spec.country)
                } else {
                    None
                };
                good.push(Probe {
                    id,
                    asn_v4: Some(asn),
                    asn_v6: None,
                    location: Some(self.probe_location()),
                    address_v4: Some(self.allocate(Owner::Network(k), Zone::Home)),
                    is_public: true,
                    is_connected: true,
                    country_code,
                });
                id += 1;
            }
            if self.rng.random_bool(self.spec.noise.stray_probe) {
                let mut p = Probe {
                    id,
                    asn_v4: Some(asn),
                    asn_v6: None,
                    location: Some(self.probe_location()),
                    address_v4: Some(self.allocate(Owner::Network(k), Zone::Home)),
                    is_public: true,
                    is_connected: true,
                    country_code: Some(self.spec.country),
                };
                match self.rng.random_range(0..5) {
                    0 => p.is_connected = false,
                    1 => p.is_public = false,
                    2 => p.location = None,
                    3 => p.country_code = Some(self.spec.foreign),
                    _ => p.address_v4 = None,
                }
                stray.push(p);
                id += 1;
            }
        }
        (good, stray)
    }

    fn pairs(&self, probes: &[Probe], population: &[PopulationEstimateRow]) -> Vec<(u64, u64)> {
        match self.spec.scope {
            TraceScope::Plan => {
                let Ok(set) = select_dominant_networks(
                    population,
                    self.spec.users,
                    self.spec.capital,
                    self.spec.thresholds,
                ) else {
                    return Vec::new();
                };
                let selection = select_probes(&set, probes);
                build_plan(&set, &selection)
                    .tasks
                    .iter()
                    .map(|t| (t.src_probe, t.dst_probe))
                    .collect()
            }
            TraceScope::AllPairs => {
                let mut out = Vec::new();
                for a in probes {
                    for b in probes {
                        if a.id != b.id {
                            out.push((a.id, b.id));
                        }
                    }
                }
                out
            }
        }
    }

    fn route_plan(
        &mut self,
        src: usize,
        dst: usize,
        dst_addr: Option<Ipv4Addr>,
        abroad: bool,
        transit: bool,
    ) -> Vec<PlannedHop> {
        let noise = self.spec.noise;
        let (a, b) = (Owner::Network(src), Owner::Network(dst));
        let mut hops = Vec::new();
        if self.rng.random_bool(noise.private) {
            hops.push(PlannedHop {
                owner: None,
                zone: Zone::Unlisted,
                address: None,
                key: false,
            });
        }
        for _ in 0..self.rng.random_range(1..=2) {
            hops.push(PlannedHop::at(a, Zone::Home));
        }
        let out_zone = if abroad { Zone::Abroad } else { Zone::Home };
        let boundary = |g: &mut Self, hops: &mut Vec<PlannedHop>| {
            if g.rng.random_bool(noise.unmapped) {
                hops.push(PlannedHop::at(Owner::Unmapped, out_zone));
            }
        };
        if transit && !self.spec.transits.is_empty() {
            boundary(self, &mut hops);
            let t = self.rng.random_range(0..self.spec.transits.len());
            let t = Owner::Network(self.spec.eyeballs.len() + t);
            let n = self.rng.random_range(1..=2);
            for i in 0..n {
                let mut hop = PlannedHop::at(t, out_zone);
                hop.key = i == 0;
                hops.push(hop);
            }
        } else if abroad {
            let mut hop = PlannedHop::at(a, Zone::Abroad);
            hop.key = true;
            hops.push(hop);
        }
        boundary(self, &mut hops);
        for _ in 0..self.rng.random_range(0..=1) {
            hops.push(PlannedHop::at(b, Zone::Home));
        }
        if !self.rng.random_bool(noise.truncated) {
            hops.push(PlannedHop {
                owner: Some(b),
                zone: Zone::Home,
                address: dst_addr,
                key: true,
            });
        }
        hops
    }

    /// Turns planned hops into measured hops plus their truth.
    fn realize(&mut self, planned: Vec<PlannedHop>) -> (Vec<TracerouteHop>, Vec<HopTruth>) {
        let noise = self.spec.noise;
        let mut hops = Vec::new();
        let mut truth = Vec::new();
        let mut rtt: f64 = 0.5;
        for (i, mut p) in planned.into_iter().enumerate() {
            let number = i as u32 + 1;
            if !p.key && self.rng.random_bool(noise.timeout) {
                hops.push(TracerouteHop {
                    hop: number,
                    results: vec![HopResponse::timeout(); 3],
                });
                truth.push(HopTruth {
                    kind: HopKind::Timeout,
                    location: HopLocation::Unknown,
                });
                continue;
            }
            let (addr, kind) = match p.owner {
                None => {
                    let private = *[
                        Ipv4Addr::new(192, 168, 1, 1),
                        Ipv4Addr::new(10, 0, 0, 1),
                        Ipv4Addr::new(100, 64, 0, 1),
                    ]
                    .choose(&mut self.rng)
                    .unwrap();
                    p.zone = Zone::Unlisted;
                    (private, HopKind::Private)
                }
                Some(owner) => {
                    if !p.key && p.address.is_none() && self.rng.random_bool(noise.unknown_geo) {
                        p.zone = if self.rng.random_bool(0.5) {
                            Zone::Unknown
                        } else {
                            Zone::Unlisted
                        };
                    }
                    let addr = match p.address {
                        Some(a) => a,
                        None => self.allocate(owner, p.zone),
                    };
                    let kind = match self.asn_of(owner) {
                        Some(asn) => HopKind::Mapped(asn),
                        None => HopKind::UnmappedPublic,
                    };
                    (addr, kind)
                }
            };
            rtt += self.rng.random_range(0.5..4.0);
            let rtt_ms = (rtt * 1000.0).round() / 1000.0;
            let mut results = Vec::with_capacity(3);
            if self.rng.random_bool(noise.leading_timeout) {
                results.push(HopResponse::timeout());
            }
            while results.len() < 3 {
                results.push(HopResponse::reply(IpAddr::V4(addr), rtt_ms));
            }
            if self.rng.random_bool(noise.second_router) {
                let other = Ipv4Addr::from(u32::from(addr) ^ 0x80);
                results[2] = HopResponse::reply(IpAddr::V4(other), rtt_ms);
            }
            hops.push(TracerouteHop {
                hop: number,
                results,
            });
            let location = if kind == HopKind::Private {
                HopLocation::Unknown
            } else {
                p.zone.location()
            };
            truth.push(HopTruth { kind, location });
        }
        (hops, truth)
    }
}

/// Builds the dataset and ground truth for `spec`. Equal seeds give equal
/// output.
pub fn generate(spec: &TopologySpec, seed: u64) -> SyntheticCountry {
    let mut g = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(seed),
        next_host: HashMap::new(),
        index: HashMap::new(),
    };
    for (k, asn) in spec
        .eyeballs
        .iter()
        .map(|e| e.asn)
        .chain(spec.transits.iter().copied())
        .enumerate()
    {
        assert!(g.index.insert(asn, k).is_none(), "AS{asn} listed twice");
    }
    assert!(
        g.index.len() <= NETWORK_OCTETS.len() * 256,
        "too many networks"
    );

    let population: Vec<PopulationEstimateRow> = spec
        .eyeballs
        .iter()
        .map(|e| PopulationEstimateRow {
            country: spec.country,
            asn: e.asn,
            fraction_percent: e.fraction_percent,
        })
        .collect();
    let (probes, stray) = g.probes();
    let (prefixes, geo) = g.tables();

    let mut pairs = g.pairs(&probes, &population);
    // one traceroute from each stray probe towards the first good one
    if let Some(target) = probes.first() {
        pairs.extend(stray.iter().map(|s| (s.id, target.id)));
    }
    let all_probes: Vec<Probe> = {
        let mut all: Vec<Probe> = probes.iter().chain(&stray).cloned().collect();
        all.sort_by_key(|p| p.id);
        all
    };
    let by_id: HashMap<u64, &Probe> = all_probes.iter().map(|p| (p.id, p)).collect();

    let mut ordinals: HashMap<(AsNumber, AsNumber), usize> = HashMap::new();
    let mut traceroutes = Vec::with_capacity(pairs.len());
    let mut routes = Vec::with_capacity(pairs.len());
    for (n, (s, d)) in pairs.into_iter().enumerate() {
        let (src, dst) = (by_id[&s], by_id[&d]);
        let (src_asn, dst_asn) = (src.asn_v4.unwrap(), dst.asn_v4.unwrap());
        let policy = spec
            .policies
            .get(&(src_asn, dst_asn))
            .copied()
            .unwrap_or_default();
        let ordinal = ordinals.entry((src_asn, dst_asn)).or_insert(0);
        let (abroad, transit) = (
            policy.abroad.applies(*ordinal),
            policy.transit.applies(*ordinal),
        );
        *ordinal += 1;
        let planned = g.route_plan(
            g.index[&src_asn],
            g.index[&dst_asn],
            dst.address_v4,
            abroad,
            transit,
        );
        let (hops, truth) = g.realize(planned);
        let dst_addr = dst
            .address_v4
            .unwrap_or_else(|| zone_net(Owner::Network(g.index[&dst_asn]), Zone::Home).network());
        traceroutes.push(
            Traceroute::new(
                s,
                d,
                src_asn,
                dst_asn,
                IpAddr::V4(dst_addr),
                BASE_TIMESTAMP + n as u64 * 60,
                hops,
            )
            .expect("generated hops are well-formed"),
        );
        routes.push(RouteTruth {
            src_probe: s,
            dst_probe: d,
            src_asn,
            dst_asn,
            hops: truth,
        });
    }

    SyntheticCountry {
        dataset: Dataset {
            population,
            country_users: BTreeMap::from([(spec.country, spec.users)]),
            capitals: BTreeMap::from([(spec.country, spec.capital)]),
            probes: all_probes,
            traceroutes,
            prefixes,
            geo,
        },
        routes,
    }
}

const RANDOM_COUNTRIES: [&str; 8] = ["CA", "DE", "BR", "JP", "ZA", "AU", "FR", "KE"];

/// A random country with 1 to `max_eyeballs` eyeball networks, up to two
/// transits, random per-pair policies and default noise. Traceroutes cover
/// every probe pair.
pub fn random_spec(seed: u64, max_eyeballs: usize) -> TopologySpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_70b0);
    let country = CountryCode::new(RANDOM_COUNTRIES.choose(&mut rng).unwrap()).unwrap();
    let n = rng.random_range(1..=max_eyeballs.max(1));
    let mut asns: Vec<u64> = (64_512..64_600).collect();
    asns.shuffle(&mut rng);
    let mut asns = asns.into_iter().map(|a| AsNumber::new(a).unwrap());
    let eyeballs: Vec<EyeballSpec> = (0..n)
        .map(|_| EyeballSpec {
            asn: asns.next().unwrap(),
            fraction_percent: if rng.random_bool(0.1) {
                // below the default floor
                (rng.random_range(0.1..0.99_f64) * 100.0).round() / 100.0
            } else {
                (rng.random_range(1.0..40.0_f64) * 100.0).round() / 100.0
            },
            probes: if rng.random_bool(0.2) {
                0
            } else {
                rng.random_range(1..=4)
            },
        })
        .collect();
    let transits: Vec<AsNumber> = (0..rng.random_range(0..=2))
        .map(|_| asns.next().unwrap())
        .collect();
    let exposures = [Exposure::Never, Exposure::Always, Exposure::Alternating];
    let mut policies = BTreeMap::new();
    for a in &eyeballs {
        for b in &eyeballs {
            policies.insert(
                (a.asn, b.asn),
                PairPolicy {
                    abroad: *exposures.choose(&mut rng).unwrap(),
                    transit: *exposures.choose(&mut rng).unwrap(),
                },
            );
        }
    }
    TopologySpec {
        country,
        foreign: CountryCode::new("US").unwrap(),
        users: rng.random_range(100_000..100_000_000),
        capital: GeoPoint::new(
            rng.random_range(-60.0..60.0),
            rng.random_range(-170.0..170.0),
        )
        .unwrap(),
        eyeballs,
        transits,
        policies,
        noise: Noise::default(),
        scope: TraceScope::AllPairs,
        thresholds: Thresholds::default(),
    }
}

/// Share of users, in percent, and number of probes of the 16 dominant
/// networks of [`canada_like`]. The ones without probes hold 11.5% of users.
const CANADA_EYEBALLS: [(u64, f64, usize); 16] = [
    (812, 20.0, 4),
    (577, 15.0, 4),
    (6327, 11.5, 3),
    (5769, 8.0, 0),
    (852, 6.0, 3),
    (855, 4.5, 3),
    (803, 3.6, 2),
    (11260, 3.0, 2),
    (7122, 2.4, 2),
    (6539, 2.0, 0),
    (13319, 1.8, 2),
    (10400, 1.6, 2),
    (32489, 1.5, 0),
    (20161, 1.3, 2),
    (46562, 1.2, 2),
    (40788, 1.1, 2),
];

const CANADA_TRANSITS: [u64; 3] = [174, 3356, 6939];

/// Area targets of the bundled fixture, as shares of all user pairs.
const CANADA_OUT_OF_COUNTRY: f64 = 0.031;
const CANADA_INCONSISTENT: f64 = 0.032;
const CANADA_INDIRECT: f64 = 0.09;
const CANADA_MIXED: f64 = 0.01;
const CANADA_SEED: u64 = 20170401;

/// Greedily marks off-diagonal cells, largest first, until `target` area
/// is reached without overshooting.
fn fill_area(
    cells: &[((AsNumber, AsNumber), f64)],
    taken: &mut Vec<(AsNumber, AsNumber)>,
    target: f64,
) -> Vec<(AsNumber, AsNumber)> {
    let mut picked = Vec::new();
    let mut area = 0.0;
    for &(pair, w) in cells {
        if pair.0 != pair.1 && !taken.contains(&pair) && area + w <= target {
            area += w;
            picked.push(pair);
            taken.push(pair);
        }
    }
    picked
}

/// The specification behind the bundled Canada-like fixture: 16 networks
/// holding 84.5% of users, three of them without probes, and per-pair
/// policies chosen so that about 3% of the area leaves the country, 3% is
/// inconsistent and 9% is indirect.
pub fn canada_like_spec() -> TopologySpec {
    let ca = CountryCode::new("CA").unwrap();
    let asn = |a: u64| AsNumber::new(a).unwrap();
    let mut eyeballs: Vec<EyeballSpec> = CANADA_EYEBALLS
        .iter()
        .map(|&(a, pct, probes)| EyeballSpec {
            asn: asn(a),
            fraction_percent: pct,
            probes,
        })
        .collect();
    // long tail below the 1% floor
    for i in 0..18u64 {
        eyeballs.push(EyeballSpec {
            asn: asn(394_000 + i),
            fraction_percent: (90 - 5 * i) as f64 / 100.0,
            probes: usize::from(i % 3 == 0),
        });
    }

    let covered: Vec<(AsNumber, f64)> = CANADA_EYEBALLS
        .iter()
        .filter(|e| e.2 > 0)
        .map(|e| (asn(e.0), e.1 / 100.0))
        .collect();
    let mut cells: Vec<((AsNumber, AsNumber), f64)> = covered
        .iter()
        .flat_map(|&(a, fa)| covered.iter().map(move |&(b, fb)| ((a, b), fa * fb)))
        .collect();
    cells.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut taken = Vec::new();
    let inconsistent = fill_area(&cells, &mut taken, CANADA_INCONSISTENT);
    let out = fill_area(&cells, &mut taken, CANADA_OUT_OF_COUNTRY);
    let mut taken = Vec::new();
    let indirect = fill_area(&cells, &mut taken, CANADA_INDIRECT);
    let mixed = fill_area(&cells, &mut taken, CANADA_MIXED);

    let mut policies = BTreeMap::new();
    for &(pair, _) in &cells {
        let abroad = if inconsistent.contains(&pair) {
            Exposure::Alternating
        } else if out.contains(&pair) {
            Exposure::Always
        } else {
            Exposure::Never
        };
        let transit = if indirect.contains(&pair) {
            Exposure::Always
        } else if mixed.contains(&pair) {
            Exposure::Alternating
        } else {
            Exposure::Never
        };
        policies.insert(pair, PairPolicy { abroad, transit });
    }

    TopologySpec {
        country: ca,
        foreign: CountryCode::new("US").unwrap(),
        users: 33_000_000,
        capital: GeoPoint::new(45.4215, -75.6972).unwrap(),
        eyeballs,
        transits: CANADA_TRANSITS.iter().map(|&a| asn(a)).collect(),
        policies,
        noise: Noise {
            unknown_geo: 0.05,
            truncated: 0.05,
            ..Noise::default()
        },
        scope: TraceScope::Plan,
        thresholds: Thresholds::default(),
    }
}

/// The bundled Canada-like fixture.
pub fn canada_like() -> SyntheticCountry {
    generate(&canada_like_spec(), CANADA_SEED)
}
