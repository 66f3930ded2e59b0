//! Parsers and writers for every input dataset, plus the optional HTTP client.
//!
//! All CSV inputs carry a fixed header line. Each parser has a strict form
//! that fails with the first bad record and a `_lenient` form that skips bad
//! records and returns them next to the values it could read. Header errors
//! are fatal in both forms.

mod csv_inputs;
pub mod http;
mod probes;
mod traceroutes;

use thiserror::Error;

use crate::model::ModelError;

pub use csv_inputs::{
    parse_capitals, parse_capitals_lenient, parse_country_users, parse_country_users_lenient,
    parse_geo_table, parse_geo_table_lenient, parse_population_estimates,
    parse_population_estimates_lenient, parse_prefix_table, parse_prefix_table_lenient,
    write_capitals, write_country_users, write_geo_table, write_population_estimates,
    write_prefix_table, PopulationEstimateRow,
};
pub use probes::{parse_probe_inventory, parse_probe_inventory_lenient, write_probe_inventory};
pub use traceroutes::{
    parse_traceroute_results, parse_traceroute_results_lenient, write_traceroute_results,
};

pub(crate) use probes::probe_from_value;
pub(crate) use traceroutes::traceroute_from_value;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("malformed header: expected `{expected}`, found `{found}`")]
    MalformedHeader { expected: String, found: String },
    #[error("line {line}: {reason}")]
    Row { line: u64, reason: String },
    #[error("line {line}: duplicate country {country}")]
    DuplicateCountry { line: u64, country: String },
    #[error("line {line}: invalid CIDR prefix `{value}`")]
    InvalidCidr { line: u64, value: String },
    #[error("line {line}: invalid AS number `{value}`")]
    InvalidAsn { line: u64, value: String },
    #[error("line {line}: invalid country `{value}`")]
    InvalidCountry { line: u64, value: String },
    #[error("JSON syntax error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    JsonSyntax { line: Option<u64>, message: String },
    #[error("probe {}: missing field `{field}`", id.map(|i| i.to_string()).unwrap_or_else(|| "<no id>".into()))]
    MissingField {
        id: Option<u64>,
        field: &'static str,
    },
    #[error("probe {id}: invalid `{field}`: {reason}")]
    InvalidField {
        id: u64,
        field: &'static str,
        reason: String,
    },
    #[error("line {line}: hop indices are not strictly increasing")]
    HopOrder { line: u64 },
    #[error("line {line}: {source}")]
    Invalid { line: u64, source: ModelError },
}

/// Values read from an input plus the records that were skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Lenient<T> {
    pub values: T,
    pub errors: Vec<IngestError>,
}

impl<T> Lenient<T> {
    fn strict(self) -> Result<T, IngestError> {
        match self.errors.into_iter().next() {
            Some(e) => Err(e),
            None => Ok(self.values),
        }
    }
}
