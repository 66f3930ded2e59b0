//! Per-traceroute analysis: AS-path extraction and locality/directness labels.

use std::fmt;
use std::net::{IpAddr, Ipv4Addr, Ipv6Addr};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lpm::{GeoTable, PrefixTable};
use crate::model::{
    AsNumber, CountryCode, Directness, DirectnessVerdict, Locality, LocalityVerdict,
    PathClassification, Traceroute,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("traceroute {src} -> {dst} has no hops")]
    EmptyTraceroute { src: u64, dst: u64 },
}

const SPECIAL_V4: &[(Ipv4Addr, u8)] = &[
    (Ipv4Addr::new(0, 0, 0, 0), 8),
    (Ipv4Addr::new(10, 0, 0, 0), 8),
    (Ipv4Addr::new(100, 64, 0, 0), 10),
    (Ipv4Addr::new(127, 0, 0, 0), 8),
    (Ipv4Addr::new(169, 254, 0, 0), 16),
    (Ipv4Addr::new(172, 16, 0, 0), 12),
    (Ipv4Addr::new(192, 0, 0, 0), 24),
    (Ipv4Addr::new(192, 0, 2, 0), 24),
    (Ipv4Addr::new(192, 88, 99, 0), 24),
    (Ipv4Addr::new(192, 168, 0, 0), 16),
    (Ipv4Addr::new(198, 18, 0, 0), 15),
    (Ipv4Addr::new(198, 51, 100, 0), 24),
    (Ipv4Addr::new(203, 0, 113, 0), 24),
    (Ipv4Addr::new(224, 0, 0, 0), 4),
    (Ipv4Addr::new(240, 0, 0, 0), 4),
];

const SPECIAL_V6: &[(Ipv6Addr, u8)] = &[
    (Ipv6Addr::UNSPECIFIED, 128),
    (Ipv6Addr::LOCALHOST, 128),
    (Ipv6Addr::new(0, 0, 0, 0, 0, 0xffff, 0, 0), 96),
    (Ipv6Addr::new(0x64, 0xff9b, 0, 0, 0, 0, 0, 0), 96),
    (Ipv6Addr::new(0x64, 0xff9b, 1, 0, 0, 0, 0, 0), 48),
    (Ipv6Addr::new(0x100, 0, 0, 0, 0, 0, 0, 0), 64),
    (Ipv6Addr::new(0x2001, 0, 0, 0, 0, 0, 0, 0), 23),
    (Ipv6Addr::new(0x2001, 0xdb8, 0, 0, 0, 0, 0, 0), 32),
    (Ipv6Addr::new(0x2002, 0, 0, 0, 0, 0, 0, 0), 16),
    (Ipv6Addr::new(0xfc00, 0, 0, 0, 0, 0, 0, 0), 7),
    (Ipv6Addr::new(0xfe80, 0, 0, 0, 0, 0, 0, 0), 10),
    (Ipv6Addr::new(0xff00, 0, 0, 0, 0, 0, 0, 0), 8),
];

/// True for private, shared, loopback, link-local, documentation, multicast
/// and other special-purpose ranges that carry no routing or location meaning.
pub fn is_special_purpose(addr: IpAddr) -> bool {
    fn within(addr: u128, net: u128, len: u8, width: u8) -> bool {
        len == 0 || (addr ^ net) >> (width - len) == 0
    }
    match addr {
        IpAddr::V4(a) => {
            let a = u32::from(a) as u128;
            SPECIAL_V4
                .iter()
                .any(|&(n, l)| within(a, u32::from(n) as u128, l, 32))
        }
        IpAddr::V6(a) => {
            let a = u128::from(a);
            SPECIAL_V6
                .iter()
                .any(|&(n, l)| within(a, u128::from(n), l, 128))
        }
    }
}

/// Address used for a hop: the first non-timeout reply, unless it is
/// special-purpose, in which case the hop carries no information.
fn usable_hop_addresses(tr: &Traceroute) -> impl Iterator<Item = IpAddr> + '_ {
    tr.hops
        .iter()
        .filter_map(|h| h.first_address())
        .filter(|a| !is_special_purpose(*a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathElement {
    As(AsNumber),
    Unknown,
}

impl fmt::Display for PathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathElement::As(a) => write!(f, "{a}"),
            PathElement::Unknown => f.write_str("?"),
        }
    }
}

/// AS-level path with no repeated neighbors and no `Unknown` sandwiched
/// between two occurrences of the same AS.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AsPath(Vec<PathElement>);

impl AsPath {
    /// Builds a path by pushing every element through [`AsPath::push`].
    pub fn from_elements(elements: impl IntoIterator<Item = PathElement>) -> Self {
        let mut path = AsPath::default();
        for e in elements {
            path.push(e);
        }
        path
    }

    /// Appends `e`, collapsing a repeat of the last element and dropping an
    /// `Unknown` that turns out to sit between two hops of the same AS.
    pub fn push(&mut self, e: PathElement) {
        let seq = &mut self.0;
        if seq.last() == Some(&e) {
            return;
        }
        if let PathElement::As(_) = e {
            if let [.., before, PathElement::Unknown] = seq.as_slice() {
                if *before == e {
                    seq.pop();
                    return;
                }
            }
        }
        seq.push(e);
    }

    pub fn elements(&self) -> &[PathElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_unknown(&self) -> bool {
        self.0.contains(&PathElement::Unknown)
    }

    pub fn asns(&self) -> impl Iterator<Item = AsNumber> + '_ {
        self.0.iter().filter_map(|e| match e {
            PathElement::As(a) => Some(*a),
            PathElement::Unknown => None,
        })
    }
}

impl fmt::Display for AsPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Maps each hop to its origin AS and frames the result with the source and
/// destination ASes. Timed-out hops and special-purpose addresses are
/// skipped; public addresses without a covering prefix become `Unknown`.
pub fn extract_as_path(tr: &Traceroute, prefixes: &PrefixTable) -> Result<AsPath, PathError> {
    if tr.hops.is_empty() {
        return Err(PathError::EmptyTraceroute {
            src: tr.src_probe,
            dst: tr.dst_probe,
        });
    }
    let mut path = AsPath::default();
    path.push(PathElement::As(tr.src_asn));
    for addr in usable_hop_addresses(tr) {
        path.push(match prefixes.lookup(addr) {
            Some(asn) => PathElement::As(*asn),
            None => PathElement::Unknown,
        });
    }
    path.push(PathElement::As(tr.dst_asn));
    Ok(path)
}

/// One hop located abroad makes the path out-of-country; otherwise one hop
/// located at home makes it in-country; otherwise nothing is known.
pub fn classify_locality(tr: &Traceroute, geo: &GeoTable, country: CountryCode) -> Locality {
    let mut seen_home = false;
    for addr in usable_hop_addresses(tr) {
        match geo.lookup(addr) {
            Some(c) if c != country => return Locality::OutOfCountry,
            Some(_) => seen_home = true,
            None => {}
        }
    }
    if seen_home {
        Locality::InCountry
    } else {
        Locality::Undetermined
    }
}

/// Any third AS makes the path indirect. Without one, an unresolved gap
/// leaves the answer open.
pub fn classify_directness(path: &AsPath, src: AsNumber, dst: AsNumber) -> Directness {
    if path.asns().any(|a| a != src && a != dst) {
        Directness::Indirect
    } else if path.has_unknown() {
        Directness::Undetermined
    } else {
        Directness::Direct
    }
}

pub fn classify_traceroute(
    tr: &Traceroute,
    prefixes: &PrefixTable,
    geo: &GeoTable,
    country: CountryCode,
) -> Result<PathClassification, PathError> {
    let path = extract_as_path(tr, prefixes)?;
    Ok(PathClassification {
        locality: classify_locality(tr, geo, country),
        directness: classify_directness(&path, tr.src_asn, tr.dst_asn),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairVerdict {
    pub locality: LocalityVerdict,
    pub directness: DirectnessVerdict,
}

/// Reduces all per-traceroute labels for one ordered AS pair to a verdict.
/// Undetermined labels abstain; disagreement among the rest is reported as
/// `Inconsistent` (locality) or `Mixed` (directness).
pub fn classify_pair(evidence: &[PathClassification], covered: bool) -> PairVerdict {
    if !covered {
        return PairVerdict {
            locality: LocalityVerdict::NoCoverage,
            directness: DirectnessVerdict::NotApplicable,
        };
    }
    let has_loc = |l| evidence.iter().any(|e| e.locality == l);
    let has_dir = |d| evidence.iter().any(|e| e.directness == d);
    let locality = match (
        has_loc(Locality::InCountry),
        has_loc(Locality::OutOfCountry),
    ) {
        (true, true) => LocalityVerdict::Inconsistent,
        (true, false) => LocalityVerdict::InCountry,
        (false, true) => LocalityVerdict::OutOfCountry,
        (false, false) => LocalityVerdict::Undetermined,
    };
    let directness = match (has_dir(Directness::Direct), has_dir(Directness::Indirect)) {
        (true, true) => DirectnessVerdict::Mixed,
        (true, false) => DirectnessVerdict::Direct,
        (false, true) => DirectnessVerdict::Indirect,
        (false, false) => DirectnessVerdict::NotApplicable,
    };
    PairVerdict {
        locality,
        directness,
    }
}
