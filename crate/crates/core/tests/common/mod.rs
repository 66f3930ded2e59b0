#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};

use tiny_http::{Header, Response, Server};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/canada")
}

pub fn golden_dir() -> PathBuf {
    fixture_dir().join("golden")
}

#[derive(Debug, Clone)]
pub struct SeenRequest {
    pub url: String,
    pub authorization: Option<String>,
}

/// Local HTTP server answering every request with `route(url)`.
pub struct MockServer {
    pub base: String,
    pub requests: Arc<Mutex<Vec<SeenRequest>>>,
    server: Arc<Server>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start(route: impl Fn(&str) -> (u16, String) + Send + 'static) -> Self {
        let server = Arc::new(Server::http("127.0.0.1:0").unwrap());
        let base = format!("http://{}/api/v2/", server.server_addr().to_ip().unwrap());
        let requests = Arc::new(Mutex::new(Vec::new()));
        let (srv, seen) = (server.clone(), requests.clone());
        let handle = thread::spawn(move || {
            for request in srv.incoming_requests() {
                let authorization = request
                    .headers()
                    .iter()
                    .find(|h| h.field.equiv("Authorization"))
                    .map(|h| h.value.to_string());
                seen.lock().unwrap().push(SeenRequest {
                    url: request.url().to_string(),
                    authorization,
                });
                let (status, body) = route(request.url());
                let header = Header::from_bytes("Content-Type", "application/json").unwrap();
                let _ = request.respond(
                    Response::from_string(body)
                        .with_status_code(status)
                        .with_header(header),
                );
            }
        });
        MockServer {
            base,
            requests,
            server,
            handle: Some(handle),
        }
    }

    pub fn urls(&self) -> Vec<String> {
        self.requests
            .lock()
            .unwrap()
            .iter()
            .map(|r| r.url.clone())
            .collect()
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

/// A probe object as the platform API returns it.
pub fn api_probe(id: u64) -> serde_json::Value {
    serde_json::json!({
        "id": id,
        "asn_v4": 812,
        "asn_v6": null,
        "geometry": {"type": "Point", "coordinates": [-75.7, 45.4]},
        "address_v4": format!("24.114.{}.{}", id / 256, id % 256),
        "is_public": true,
        "status": {"id": 1, "name": "Connected"},
        "country_code": "CA"
    })
}

pub fn api_traceroute(src: u64, dst: u64) -> serde_json::Value {
    serde_json::json!({
        "prb_id": src,
        "dst_probe": dst,
        "src_asn": 812,
        "dst_asn": 577,
        "dst_addr": "70.52.0.1",
        "af": 4,
        "timestamp": 1491004800,
        "result": [
            {"hop": 1, "result": [{"from": "24.114.0.1", "rtt": 1.2}]},
            {"hop": 2, "result": [{"x": "*"}, {"x": "*"}, {"x": "*"}]},
            {"hop": 3, "result": [{"from": "70.52.0.1", "rtt": 7.9}]}
        ]
    })
}
