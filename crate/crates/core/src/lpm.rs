//! Longest-prefix-match tables for IP→AS and IP→country lookups.
//!
//! Each address family keeps one hash map per prefix length, keyed by the
//! masked network bits. A lookup probes the populated lengths from most to
//! least specific, so its cost is bounded by the number of distinct lengths
//! in the table (at most 33 for IPv4, 129 for IPv6).

use std::collections::HashMap;
use std::net::{IpAddr, Ipv4Addr, Ipv6Addr};

use ipnet::{IpNet, Ipv4Net, Ipv6Net};

use crate::model::{AsNumber, CountryCode};

#[derive(Debug, Clone)]
struct FamilyTable<V> {
    width: u8,
    by_len: Vec<HashMap<u128, V>>,
    // populated lengths, descending
    lengths: Vec<u8>,
}

impl<V> FamilyTable<V> {
    fn new(width: u8) -> Self {
        Self {
            width,
            by_len: (0..=width).map(|_| HashMap::new()).collect(),
            lengths: Vec::new(),
        }
    }

    fn key(&self, bits: u128, len: u8) -> u128 {
        if len == 0 {
            0
        } else {
            bits >> (self.width - len)
        }
    }

    fn insert(&mut self, bits: u128, len: u8, value: V) -> Option<V> {
        let key = self.key(bits, len);
        let prev = self.by_len[len as usize].insert(key, value);
        if let Err(pos) = self.lengths.binary_search_by(|l| len.cmp(l)) {
            self.lengths.insert(pos, len);
        }
        prev
    }

    fn lookup(&self, bits: u128) -> Option<(u8, &V)> {
        self.lengths.iter().find_map(|&len| {
            self.by_len[len as usize]
                .get(&self.key(bits, len))
                .map(|v| (len, v))
        })
    }

    fn len(&self) -> usize {
        self.by_len.iter().map(HashMap::len).sum()
    }

    fn entries(&self) -> impl Iterator<Item = (u128, u8, &V)> + '_ {
        self.by_len.iter().enumerate().flat_map(move |(len, m)| {
            let len = len as u8;
            m.iter().map(move |(&key, v)| {
                let bits = if len == 0 {
                    0
                } else {
                    key << (self.width - len)
                };
                (bits, len, v)
            })
        })
    }
}

fn bits_of(addr: IpAddr) -> u128 {
    match addr {
        IpAddr::V4(a) => u32::from(a) as u128,
        IpAddr::V6(a) => u128::from(a),
    }
}

/// A set of `(prefix, value)` entries answering most-specific-match queries.
///
/// Prefixes are normalized (host bits cleared) on insertion. Inserting the
/// same prefix twice replaces the earlier value.
#[derive(Debug, Clone)]
pub struct PrefixMap<V> {
    v4: FamilyTable<V>,
    v6: FamilyTable<V>,
}

impl<V> Default for PrefixMap<V> {
    fn default() -> Self {
        Self {
            v4: FamilyTable::new(32),
            v6: FamilyTable::new(128),
        }
    }
}

impl<V> PrefixMap<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: IpNet, value: V) -> Option<V> {
        let prefix = prefix.trunc();
        let bits = bits_of(prefix.network());
        match prefix {
            IpNet::V4(_) => self.v4.insert(bits, prefix.prefix_len(), value),
            IpNet::V6(_) => self.v6.insert(bits, prefix.prefix_len(), value),
        }
    }

    /// Value of the most specific prefix containing `addr`.
    pub fn lookup(&self, addr: IpAddr) -> Option<&V> {
        self.lookup_with_len(addr).map(|(_, v)| v)
    }

    /// Like [`lookup`](Self::lookup), also returning the matched prefix length.
    pub fn lookup_with_len(&self, addr: IpAddr) -> Option<(u8, &V)> {
        match addr {
            IpAddr::V4(_) => self.v4.lookup(bits_of(addr)),
            IpAddr::V6(_) => self.v6.lookup(bits_of(addr)),
        }
    }

    pub fn len(&self) -> usize {
        self.v4.len() + self.v6.len()
    }

    /// All entries, sorted by family, then network address, then length.
    pub fn entries(&self) -> Vec<(IpNet, &V)> {
        let v4 = self.v4.entries().map(|(bits, len, v)| {
            let addr = Ipv4Addr::from(bits as u32);
            (IpNet::V4(Ipv4Net::new(addr, len).unwrap()), v)
        });
        let v6 = self.v6.entries().map(|(bits, len, v)| {
            let addr = Ipv6Addr::from(bits);
            (IpNet::V6(Ipv6Net::new(addr, len).unwrap()), v)
        });
        let mut all: Vec<_> = v4.chain(v6).collect();
        all.sort_by_key(|(net, _)| *net);
        all
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<V> FromIterator<(IpNet, V)> for PrefixMap<V> {
    fn from_iter<I: IntoIterator<Item = (IpNet, V)>>(iter: I) -> Self {
        let mut map = Self::new();
        for (p, v) in iter {
            map.insert(p, v);
        }
        map
    }
}

/// IP→origin AS mapping.
pub type PrefixTable = PrefixMap<AsNumber>;

/// Geolocation of a prefix; `Unknown` is an explicit "no country" entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeoLabel {
    Country(CountryCode),
    Unknown,
}

/// IP→country mapping. Explicit unknown entries and missing entries both
/// resolve to `None`, but an unknown entry still shadows less specific ones.
#[derive(Debug, Clone, Default)]
pub struct GeoTable(PrefixMap<GeoLabel>);

impl GeoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: IpNet, label: GeoLabel) -> Option<GeoLabel> {
        self.0.insert(prefix, label)
    }

    pub fn lookup(&self, addr: IpAddr) -> Option<CountryCode> {
        match self.0.lookup(addr) {
            Some(GeoLabel::Country(c)) => Some(*c),
            _ => None,
        }
    }

    pub fn label(&self, addr: IpAddr) -> Option<GeoLabel> {
        self.0.lookup(addr).copied()
    }

    pub fn entries(&self) -> Vec<(IpNet, GeoLabel)> {
        self.0.entries().into_iter().map(|(n, l)| (n, *l)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(IpNet, GeoLabel)> for GeoTable {
    fn from_iter<I: IntoIterator<Item = (IpNet, GeoLabel)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}
