//! Paginated probe-inventory download against a local stand-in for the
//! measurement platform API, serving 100 + 37 probes on two pages.

use std::thread;

use eyeball_jedi::ingest::http::{AtlasClient, ClientConfig};
use eyeball_jedi::{CountryCode, Probe};
use serde_json::{json, Value};
use tiny_http::{Header, Response, Server};

fn page(ids: std::ops::Range<u64>, next: Option<String>) -> Value {
    let results: Vec<Value> = ids
        .map(|id| {
            json!({
                "id": id,
                "asn_v4": 812,
                "geometry": {"type": "Point", "coordinates": [-75.7, 45.4]},
                "address_v4": format!("24.114.{}.{}", id / 256, id % 256),
                "is_public": true,
                "status": {"id": 1, "name": "Connected"},
                "country_code": "CA"
            })
        })
        .collect();
    json!({"count": 137, "next": next, "results": results})
}

pub fn run_example() -> Vec<Probe> {
    let server = Server::http("127.0.0.1:0").unwrap();
    let base = format!("http://{}/api/v2/", server.server_addr().to_ip().unwrap());
    let second = format!("{base}probes/?country_code=CA&page=2");
    let handle = thread::spawn(move || {
        for _ in 0..2 {
            let request = server.recv().unwrap();
            let body = if request.url().contains("page=2") {
                page(101..138, None)
            } else {
                page(1..101, Some(second.clone()))
            };
            let header = Header::from_bytes("Content-Type", "application/json").unwrap();
            request
                .respond(Response::from_string(body.to_string()).with_header(header))
                .unwrap();
        }
    });

    let client = AtlasClient::new(&ClientConfig {
        rate_limit: 50.0,
        ..ClientConfig::new(base)
    })
    .unwrap();
    let probes = client
        .fetch_probe_inventory(Some(CountryCode::new("CA").unwrap()))
        .unwrap();
    handle.join().unwrap();
    probes
}

fn main() {
    let probes = run_example();
    let selectable = probes.iter().filter(|p| p.is_selectable()).count();
    println!("{} probes fetched, {selectable} selectable", probes.len());
}
