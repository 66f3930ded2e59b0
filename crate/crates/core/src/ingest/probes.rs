use std::net::Ipv4Addr;

use serde_json::{json, Map, Value};

use super::{IngestError, Lenient};
use crate::model::{AsNumber, CountryCode, GeoPoint, Probe};

fn missing(id: Option<u64>, field: &'static str) -> IngestError {
    IngestError::MissingField { id, field }
}

fn invalid(id: u64, field: &'static str, reason: impl ToString) -> IngestError {
    IngestError::InvalidField {
        id,
        field,
        reason: reason.to_string(),
    }
}

fn optional_asn(
    obj: &Map<String, Value>,
    id: u64,
    field: &'static str,
) -> Result<Option<AsNumber>, IngestError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .ok_or_else(|| invalid(id, field, "not an unsigned integer"))
            .and_then(|n| AsNumber::new(n).map_err(|e| invalid(id, field, e)))
            .map(Some),
    }
}

/// Latitude/longitude either as flat fields or as a GeoJSON point
/// (`geometry.coordinates = [lon, lat]`), which is what the probe API returns.
fn location(obj: &Map<String, Value>, id: u64) -> Result<Option<GeoPoint>, IngestError> {
    let flat = (
        obj.get("latitude").and_then(Value::as_f64),
        obj.get("longitude").and_then(Value::as_f64),
    );
    let (lat, lon) = match flat {
        (Some(lat), Some(lon)) => (lat, lon),
        _ => match obj
            .get("geometry")
            .and_then(|g| g.get("coordinates"))
            .and_then(Value::as_array)
            .map(|c| {
                (
                    c.first().and_then(Value::as_f64),
                    c.get(1).and_then(Value::as_f64),
                )
            }) {
            Some((Some(lon), Some(lat))) => (lat, lon),
            _ => return Ok(None),
        },
    };
    GeoPoint::new(lat, lon)
        .map(Some)
        .map_err(|e| invalid(id, "location", e))
}

/// Converts one inventory object into a [`Probe`]. Accepts both the flat file
/// schema and the nested shapes used by the probe API (`status.name`,
/// `geometry.coordinates`).
pub(crate) fn probe_from_value(value: &Value) -> Result<Probe, IngestError> {
    let obj = value.as_object().ok_or(IngestError::JsonSyntax {
        line: None,
        message: "probe entry is not an object".into(),
    })?;
    let id = obj
        .get("id")
        .and_then(Value::as_u64)
        .ok_or_else(|| missing(None, "id"))?;
    let is_public = obj
        .get("is_public")
        .and_then(Value::as_bool)
        .ok_or_else(|| missing(Some(id), "is_public"))?;
    let status = match obj.get("status") {
        Some(Value::String(s)) => s.as_str(),
        Some(Value::Object(o)) => o
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| missing(Some(id), "status"))?,
        _ => return Err(missing(Some(id), "status")),
    };
    let address_v4 = match obj.get("address_v4") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(
            s.parse::<Ipv4Addr>()
                .map_err(|e| invalid(id, "address_v4", e))?,
        ),
        Some(_) => return Err(invalid(id, "address_v4", "not a string")),
    };
    let country_code = match obj.get("country_code") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => {
            Some(CountryCode::new(s).map_err(|e| invalid(id, "country_code", e))?)
        }
        Some(_) => return Err(invalid(id, "country_code", "not a string")),
    };
    Ok(Probe {
        id,
        asn_v4: optional_asn(obj, id, "asn_v4")?,
        asn_v6: optional_asn(obj, id, "asn_v6")?,
        location: location(obj, id)?,
        address_v4,
        is_public,
        is_connected: status == "Connected",
        country_code,
    })
}

pub fn parse_probe_inventory_lenient(text: &str) -> Result<Lenient<Vec<Probe>>, IngestError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| IngestError::JsonSyntax {
        line: Some(e.line() as u64),
        message: e.to_string(),
    })?;
    let entries = doc.as_array().ok_or(IngestError::JsonSyntax {
        line: None,
        message: "probe inventory must be a JSON array".into(),
    })?;
    let mut values = Vec::with_capacity(entries.len());
    let mut errors = Vec::new();
    for entry in entries {
        match probe_from_value(entry) {
            Ok(p) => values.push(p),
            Err(e) => errors.push(e),
        }
    }
    Ok(Lenient { values, errors })
}

/// Parses a JSON array of probe objects with fields `id`, `asn_v4`, `asn_v6`,
/// `latitude`, `longitude`, `address_v4`, `is_public` and `status`.
pub fn parse_probe_inventory(text: &str) -> Result<Vec<Probe>, IngestError> {
    parse_probe_inventory_lenient(text)?.strict()
}

pub fn write_probe_inventory(probes: &[Probe]) -> String {
    let entries: Vec<Value> = probes
        .iter()
        .map(|p| {
            let mut v = json!({
                "id": p.id,
                "asn_v4": p.asn_v4.map(AsNumber::get),
                "asn_v6": p.asn_v6.map(AsNumber::get),
                "latitude": p.location.map(|l| l.latitude()),
                "longitude": p.location.map(|l| l.longitude()),
                "address_v4": p.address_v4.map(|a| a.to_string()),
                "is_public": p.is_public,
                "status": if p.is_connected { "Connected" } else { "Disconnected" },
            });
            if let Some(cc) = p.country_code {
                v["country_code"] = json!(cc.as_str());
            }
            v
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&entries).expect("probe values serialize");
    out.push('\n');
    out
}
