mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

/// Copy of the fixture inputs in a scratch directory, so tests can break them.
fn scratch() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(common::fixture_dir()).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
        }
    }
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    let config = dir.join("eyeball-jedi.toml");
    let out = dir.join("out");
    Command::new(env!("CARGO_BIN_EXE_eyeball-jedi"))
        .args(args)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn coverage_writes_country_json_and_world_csv() {
    let dir = scratch();
    let o = run(dir.path(), &["coverage"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("coverage_CA.json")).unwrap()).unwrap();
    assert!(json.is_object());
    let world = fs::read_to_string(out.join("coverage_world.csv")).unwrap();
    let rows: Vec<_> = world.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("CA,0.730000"), "{world}");
}

#[test]
fn missing_input_names_the_file() {
    let dir = scratch();
    fs::remove_file(dir.path().join("probes.json")).unwrap();
    let o = run(dir.path(), &["coverage"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("probes.json"), "{}", stderr(&o));
}

#[test]
fn unknown_country_is_an_error() {
    let dir = scratch();
    let o = run(dir.path(), &["coverage", "--country", "XX"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("XX"), "{}", stderr(&o));
}

#[test]
fn no_covered_networks_gives_empty_plan() {
    let dir = scratch();
    fs::write(dir.path().join("probes.json"), "[]").unwrap();
    let o = run(dir.path(), &["plan"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let plan: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/plan_CA.json")).unwrap())
            .unwrap();
    assert_eq!(plan["tasks"].as_array().unwrap().len(), 0);
}

#[test]
fn no_matching_traceroutes_exits_3() {
    let dir = scratch();
    fs::write(dir.path().join("traceroutes.ndjson"), "").unwrap();
    let o = run(dir.path(), &["analyze"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn stray_traceroutes_are_warned_about() {
    let dir = scratch();
    let o = run(dir.path(), &["analyze"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(
        err.lines().filter(|l| l.contains("WARN")).count() >= 1,
        "{err}"
    );
    let report = fs::read_to_string(dir.path().join("out/report_CA.txt")).unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout), report);
}

#[test]
fn bad_threshold_rejected() {
    let dir = scratch();
    for cap in ["0", "1.5", "nan"] {
        let o = run(dir.path(), &["coverage", "--cap", cap]);
        assert_eq!(o.status.code(), Some(2), "cap {cap}: {}", stderr(&o));
    }
}

#[test]
fn usage_errors_exit_2() {
    let bin = env!("CARGO_BIN_EXE_eyeball-jedi");
    for args in [
        &["explode"][..],
        &["coverage", "--country", "CA", "--all"],
        &[],
    ] {
        let o = Command::new(bin).args(args).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn render_after_analyze() {
    let dir = scratch();
    assert_eq!(run(dir.path(), &["analyze"]).status.code(), Some(0));
    let o = run(dir.path(), &["render", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("out/matrix_CA.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn render_without_matrix_fails() {
    let dir = scratch();
    fs::create_dir(dir.path().join("out")).unwrap();
    let o = run(dir.path(), &["render"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn fetch_without_base_url_fails() {
    let dir = scratch();
    let o = run(dir.path(), &["fetch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fetch_writes_inputs() {
    use serde_json::json;
    let server = common::MockServer::start(|url| {
        if url.contains("/probes/") {
            (
                200,
                json!({"next": null, "results": [common::api_probe(1), common::api_probe(2)]})
                    .to_string(),
            )
        } else {
            (200, json!([common::api_traceroute(1, 2)]).to_string())
        }
    });
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("eyeball-jedi.toml"),
        format!(
            "country = \"CA\"\n[http]\nbase_url = \"{}\"\nmeasurement_ids = [42]\n",
            server.base
        ),
    )
    .unwrap();
    let o = run(dir.path(), &["fetch"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let probes = fs::read_to_string(dir.path().join("out/probes.json")).unwrap();
    assert_eq!(
        eyeball_jedi::ingest::parse_probe_inventory(&probes)
            .unwrap()
            .len(),
        2
    );
    let trs = fs::read_to_string(dir.path().join("out/traceroutes.ndjson")).unwrap();
    assert_eq!(trs.lines().count(), 1);
}
