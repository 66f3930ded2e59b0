// Every example is compiled into this test binary and run once.

#[allow(dead_code)]
#[path = "../examples/coverage_report.rs"]
mod coverage_report;
#[allow(dead_code)]
#[path = "../examples/end_to_end.rs"]
mod end_to_end;
#[allow(dead_code)]
#[path = "../examples/fetch_probes.rs"]
mod fetch_probes;
#[allow(dead_code)]
#[path = "../examples/matrix_metrics.rs"]
mod matrix_metrics;
#[allow(dead_code)]
#[path = "../examples/path_classification.rs"]
mod path_classification;
#[allow(dead_code)]
#[path = "../examples/probe_selection.rs"]
mod probe_selection;
#[allow(dead_code)]
#[path = "../examples/render_svg.rs"]
mod render_svg;
#[allow(dead_code)]
#[path = "../examples/synthetic_country.rs"]
mod synthetic_country;

use eyeball_jedi::model::{DirectnessVerdict, LocalityVerdict};

#[test]
fn coverage_report_counts_only_usable_probes() {
    let report = coverage_report::run_example();
    assert_eq!(report.eyeball_set.len(), 5);
    assert_eq!(report.covered_networks.len(), 2);
    assert!((report.covered_user_fraction - 0.55).abs() < 1e-12);
}

#[test]
fn probe_selection_plan_size() {
    let (_, selection, plan) = probe_selection::run_example();
    let s = selection
        .get(eyeball_jedi::AsNumber::new(812).unwrap())
        .unwrap();
    assert_eq!((s.closest.id, s.farthest.id), (11, 13));
    // 2 + 2 + 0 diagonal tasks, 8 between the two-probe networks,
    // 4 + 4 between them and the single-probe one
    assert_eq!(plan.tasks.len(), 20);
}

#[test]
fn path_classification_disagreeing_measurements() {
    let v = path_classification::run_example();
    assert_eq!(v.locality, LocalityVerdict::Inconsistent);
    assert_eq!(v.directness, DirectnessVerdict::Mixed);
}

#[test]
fn matrix_metrics_unexamined_area() {
    let m = matrix_metrics::run_example();
    assert!((m.unexamined - 0.285975).abs() < 1e-9);
    assert!((m.out_of_country - 0.03).abs() < 1e-12);
    assert!((m.partition_total() - 1.0).abs() < 1e-9);
}

#[test]
fn end_to_end_uses_every_planned_traceroute() {
    let a = end_to_end::run_example();
    assert_eq!(a.matched, a.plan.tasks.len());
    assert!(a.metrics.in_country > 0.4);
}

#[test]
fn render_svg_has_one_rect_per_cell() {
    let svg = render_svg::run_example();
    assert_eq!(svg.matches("<title>AS").count(), 16 * 16);
}

#[test]
fn synthetic_country_writes_all_inputs() {
    let country = synthetic_country::run_example(Some(3));
    let dir = tempfile::tempdir().unwrap();
    country.dataset.write_to_dir(dir.path()).unwrap();
    for f in [
        "population.csv",
        "country_users.csv",
        "capitals.csv",
        "probes.json",
        "traceroutes.ndjson",
        "prefix2as.csv",
        "geo.csv",
    ] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn fetch_probes_two_pages() {
    assert_eq!(fetch_probes::run_example().len(), 137);
}
