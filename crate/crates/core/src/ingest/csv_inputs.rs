use std::collections::BTreeMap;
use std::fmt::Write as _;

use csv::{ReaderBuilder, StringRecord, Trim};
use ipnet::IpNet;
use log::warn;
use serde::{Deserialize, Serialize};

use super::{IngestError, Lenient};
use crate::lpm::{GeoLabel, GeoTable, PrefixTable};
use crate::model::{AsNumber, CountryCode, GeoPoint};

const POPULATION_HEADER: &[&str] = &["country", "asn", "fraction_percent"];
const USERS_HEADER: &[&str] = &["country", "internet_users"];
const CAPITALS_HEADER: &[&str] = &["country", "latitude", "longitude"];
const PREFIX_HEADER: &[&str] = &["prefix", "origin_asn"];
const GEO_HEADER: &[&str] = &["prefix", "country"];

/// Geolocation sentinel for "no country known".
pub const UNKNOWN_COUNTRY: &str = "??";

/// One per-AS population estimate, as a percentage of the country's users.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationEstimateRow {
    pub country: CountryCode,
    pub asn: AsNumber,
    pub fraction_percent: f64,
}

impl PopulationEstimateRow {
    /// The estimate as a fraction in `[0, 1]`. This is the only place
    /// percentages are rescaled.
    pub fn fraction(&self) -> f64 {
        self.fraction_percent / 100.0
    }
}

/// Yields `(line, record)` for every data row after checking the header.
fn records<'a>(
    text: &'a str,
    header: &[&str],
) -> Result<impl Iterator<Item = (u64, Result<StringRecord, IngestError>)> + 'a, IngestError> {
    let rdr = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut iter = rdr.into_records();
    let expected = header.join(",");
    match iter.next() {
        Some(Ok(first)) if first.iter().eq(header.iter().copied()) => {}
        Some(Ok(first)) => {
            return Err(IngestError::MalformedHeader {
                expected,
                found: first.iter().collect::<Vec<_>>().join(","),
            })
        }
        Some(Err(e)) => {
            return Err(IngestError::MalformedHeader {
                expected,
                found: e.to_string(),
            })
        }
        None => {
            return Err(IngestError::MalformedHeader {
                expected,
                found: String::new(),
            })
        }
    }
    let width = header.len();
    Ok(iter.map(move |r| match r {
        Ok(rec) => {
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != width {
                let reason = format!("expected {width} fields, found {}", rec.len());
                (line, Err(IngestError::Row { line, reason }))
            } else {
                (line, Ok(rec))
            }
        }
        Err(e) => {
            let line = e.position().map_or(0, |p| p.line());
            let reason = e.to_string();
            (line, Err(IngestError::Row { line, reason }))
        }
    }))
}

fn country_field(line: u64, value: &str) -> Result<CountryCode, IngestError> {
    CountryCode::new(value).map_err(|_| IngestError::InvalidCountry {
        line,
        value: value.to_string(),
    })
}

fn asn_field(line: u64, value: &str) -> Result<AsNumber, IngestError> {
    value.parse().map_err(|_| IngestError::InvalidAsn {
        line,
        value: value.to_string(),
    })
}

fn cidr_field(line: u64, value: &str) -> Result<IpNet, IngestError> {
    value.parse().map_err(|_| IngestError::InvalidCidr {
        line,
        value: value.to_string(),
    })
}

fn float_field(line: u64, name: &str, value: &str) -> Result<f64, IngestError> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(IngestError::Row {
            line,
            reason: format!("{name} `{value}` is not a finite number"),
        }),
    }
}

pub fn parse_population_estimates_lenient(
    text: &str,
) -> Result<Lenient<Vec<PopulationEstimateRow>>, IngestError> {
    let mut rows: Vec<PopulationEstimateRow> = Vec::new();
    let mut index: BTreeMap<(CountryCode, AsNumber), usize> = BTreeMap::new();
    let mut errors = Vec::new();
    for (line, rec) in records(text, POPULATION_HEADER)? {
        let row = rec.and_then(|rec| {
            let country = country_field(line, &rec[0])?;
            let asn = asn_field(line, &rec[1])?;
            let fraction_percent = float_field(line, "fraction_percent", &rec[2])?;
            if !(0.0..=100.0).contains(&fraction_percent) {
                return Err(IngestError::Row {
                    line,
                    reason: format!("fraction_percent {fraction_percent} outside [0, 100]"),
                });
            }
            Ok(PopulationEstimateRow {
                country,
                asn,
                fraction_percent,
            })
        });
        match row {
            Ok(row) => match index.get(&(row.country, row.asn)) {
                Some(&i) => {
                    warn!(
                        "population line {line}: duplicate {} AS{}, keeping the later value",
                        row.country, row.asn
                    );
                    rows[i] = row;
                }
                None => {
                    index.insert((row.country, row.asn), rows.len());
                    rows.push(row);
                }
            },
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient {
        values: rows,
        errors,
    })
}

/// Parses `country,asn,fraction_percent`. Repeated `(country, asn)` rows keep
/// the last value.
pub fn parse_population_estimates(text: &str) -> Result<Vec<PopulationEstimateRow>, IngestError> {
    parse_population_estimates_lenient(text)?.strict()
}

pub fn write_population_estimates(rows: &[PopulationEstimateRow]) -> String {
    let mut out = POPULATION_HEADER.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.country, r.asn, r.fraction_percent);
    }
    out
}

pub fn parse_country_users_lenient(
    text: &str,
) -> Result<Lenient<BTreeMap<CountryCode, u64>>, IngestError> {
    let mut users = BTreeMap::new();
    let mut errors = Vec::new();
    for (line, rec) in records(text, USERS_HEADER)? {
        let entry = rec.and_then(|rec| {
            let country = country_field(line, &rec[0])?;
            let count = rec[1].parse::<u64>().map_err(|_| IngestError::Row {
                line,
                reason: format!("internet_users `{}` is not a non-negative integer", &rec[1]),
            })?;
            if users.contains_key(&country) {
                return Err(IngestError::DuplicateCountry {
                    line,
                    country: country.to_string(),
                });
            }
            Ok((country, count))
        });
        match entry {
            Ok((c, n)) => {
                users.insert(c, n);
            }
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient {
        values: users,
        errors,
    })
}

/// Parses `country,internet_users`; a country may appear only once.
pub fn parse_country_users(text: &str) -> Result<BTreeMap<CountryCode, u64>, IngestError> {
    parse_country_users_lenient(text)?.strict()
}

pub fn write_country_users(users: &BTreeMap<CountryCode, u64>) -> String {
    let mut out = USERS_HEADER.join(",");
    out.push('\n');
    for (c, n) in users {
        let _ = writeln!(out, "{c},{n}");
    }
    out
}

pub fn parse_capitals_lenient(
    text: &str,
) -> Result<Lenient<BTreeMap<CountryCode, GeoPoint>>, IngestError> {
    let mut capitals = BTreeMap::new();
    let mut errors = Vec::new();
    for (line, rec) in records(text, CAPITALS_HEADER)? {
        let entry = rec.and_then(|rec| {
            let country = country_field(line, &rec[0])?;
            let lat = float_field(line, "latitude", &rec[1])?;
            let lon = float_field(line, "longitude", &rec[2])?;
            let point =
                GeoPoint::new(lat, lon).map_err(|source| IngestError::Invalid { line, source })?;
            if capitals.contains_key(&country) {
                return Err(IngestError::DuplicateCountry {
                    line,
                    country: country.to_string(),
                });
            }
            Ok((country, point))
        });
        match entry {
            Ok((c, p)) => {
                capitals.insert(c, p);
            }
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient {
        values: capitals,
        errors,
    })
}

/// Parses `country,latitude,longitude`.
pub fn parse_capitals(text: &str) -> Result<BTreeMap<CountryCode, GeoPoint>, IngestError> {
    parse_capitals_lenient(text)?.strict()
}

pub fn write_capitals(capitals: &BTreeMap<CountryCode, GeoPoint>) -> String {
    let mut out = CAPITALS_HEADER.join(",");
    out.push('\n');
    for (c, p) in capitals {
        let _ = writeln!(out, "{c},{},{}", p.latitude(), p.longitude());
    }
    out
}

pub fn parse_prefix_table_lenient(text: &str) -> Result<Lenient<PrefixTable>, IngestError> {
    let mut table = PrefixTable::new();
    let mut errors = Vec::new();
    for (line, rec) in records(text, PREFIX_HEADER)? {
        let entry = rec.and_then(|rec| Ok((cidr_field(line, &rec[0])?, asn_field(line, &rec[1])?)));
        match entry {
            Ok((prefix, asn)) => {
                if let Some(prev) = table.insert(prefix, asn) {
                    if prev != asn {
                        warn!(
                            "prefix table line {line}: {prefix} remapped from AS{prev} to AS{asn}"
                        );
                    }
                }
            }
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient {
        values: table,
        errors,
    })
}

/// Parses `prefix,origin_asn` into a longest-prefix-match table.
pub fn parse_prefix_table(text: &str) -> Result<PrefixTable, IngestError> {
    parse_prefix_table_lenient(text)?.strict()
}

pub fn write_prefix_table(table: &PrefixTable) -> String {
    let mut out = PREFIX_HEADER.join(",");
    out.push('\n');
    for (prefix, asn) in table.entries() {
        let _ = writeln!(out, "{prefix},{asn}");
    }
    out
}

pub fn parse_geo_table_lenient(text: &str) -> Result<Lenient<GeoTable>, IngestError> {
    let mut table = GeoTable::new();
    let mut errors = Vec::new();
    for (line, rec) in records(text, GEO_HEADER)? {
        let entry = rec.and_then(|rec| {
            let prefix = cidr_field(line, &rec[0])?;
            let label = if &rec[1] == UNKNOWN_COUNTRY {
                GeoLabel::Unknown
            } else {
                GeoLabel::Country(country_field(line, &rec[1])?)
            };
            Ok((prefix, label))
        });
        match entry {
            Ok((prefix, label)) => {
                table.insert(prefix, label);
            }
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient {
        values: table,
        errors,
    })
}

/// Parses `prefix,country`, where `??` marks a prefix of unknown location.
pub fn parse_geo_table(text: &str) -> Result<GeoTable, IngestError> {
    parse_geo_table_lenient(text)?.strict()
}

pub fn write_geo_table(table: &GeoTable) -> String {
    let mut out = GEO_HEADER.join(",");
    out.push('\n');
    for (prefix, label) in table.entries() {
        let _ = match label {
            GeoLabel::Country(c) => writeln!(out, "{prefix},{c}"),
            GeoLabel::Unknown => writeln!(out, "{prefix},{UNKNOWN_COUNTRY}"),
        };
    }
    out
}
