use std::net::IpAddr;

use serde::Deserialize;
use serde_json::Value;

use super::{IngestError, Lenient};
use crate::model::{AsNumber, ModelError, Traceroute, TracerouteHop};

#[derive(Deserialize)]
struct Record {
    #[serde(alias = "prb_id")]
    src_probe: u64,
    dst_probe: u64,
    src_asn: AsNumber,
    dst_asn: AsNumber,
    dst_addr: IpAddr,
    af: u8,
    timestamp: u64,
    #[serde(alias = "result")]
    hops: Vec<TracerouteHop>,
}

fn from_record(line: u64, r: Record) -> Result<Traceroute, IngestError> {
    if (r.af == 4) != r.dst_addr.is_ipv4() || !(r.af == 4 || r.af == 6) {
        return Err(IngestError::Invalid {
            line,
            source: ModelError::AddressFamily {
                af: r.af,
                addr: r.dst_addr,
            },
        });
    }
    Traceroute::new(
        r.src_probe,
        r.dst_probe,
        r.src_asn,
        r.dst_asn,
        r.dst_addr,
        r.timestamp,
        r.hops,
    )
    .map_err(|source| match source {
        ModelError::HopOrder(_) => IngestError::HopOrder { line },
        source => IngestError::Invalid { line, source },
    })
}

/// Same normalization as the file parser, for records that arrive inside a
/// larger JSON document. `line` is the position used in error messages.
pub(crate) fn traceroute_from_value(line: u64, value: Value) -> Result<Traceroute, IngestError> {
    let record: Record = serde_json::from_value(value).map_err(|e| IngestError::JsonSyntax {
        line: Some(line),
        message: e.to_string(),
    })?;
    from_record(line, record)
}

pub fn parse_traceroute_results_lenient(
    text: &str,
) -> Result<Lenient<Vec<Traceroute>>, IngestError> {
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Record>(raw)
            .map_err(|e| IngestError::JsonSyntax {
                line: Some(line),
                message: e.to_string(),
            })
            .and_then(|r| from_record(line, r));
        match parsed {
            Ok(t) => values.push(t),
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient { values, errors })
}

/// Parses newline-delimited traceroute records. Hops must already be in
/// strictly increasing order; timeout responses (`{"x":"*"}`) are kept.
pub fn parse_traceroute_results(text: &str) -> Result<Vec<Traceroute>, IngestError> {
    parse_traceroute_results_lenient(text)?.strict()
}

pub fn write_traceroute_results(traceroutes: &[Traceroute]) -> String {
    let mut out = String::new();
    for t in traceroutes {
        out.push_str(&serde_json::to_string(t).expect("traceroute serializes"));
        out.push('\n');
    }
    out
}
