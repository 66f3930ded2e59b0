//! Dominant eyeball networks of a country and which of them host probes.

use eyeball_jedi::coverage::{
    compute_probe_coverage, coverage_world_report, write_world_csv, CoverageReport,
};
use eyeball_jedi::ingest::{
    parse_capitals, parse_country_users, parse_population_estimates, parse_probe_inventory,
};
use eyeball_jedi::{select_dominant_networks, CountryCode, Thresholds};

const POPULATION: &str = "\
country,asn,fraction_percent
CA,812,30.0
CA,577,25.0
CA,6327,20.0
CA,852,15.0
CA,5769,6.0
CA,11260,0.8
";

const USERS: &str = "country,internet_users\nCA,33000000\n";
const CAPITALS: &str = "country,latitude,longitude\nCA,45.4215,-75.6972\n";

const PROBES: &str = r#"[
  {"id": 1, "asn_v4": 812, "latitude": 43.65, "longitude": -79.38, "address_v4": "24.114.0.10", "is_public": true, "status": "Connected"},
  {"id": 2, "asn_v4": 577, "latitude": 45.50, "longitude": -73.57, "address_v4": "70.52.0.20", "is_public": true, "status": "Connected"},
  {"id": 3, "asn_v4": 6327, "latitude": 51.05, "longitude": -114.07, "address_v4": "68.144.0.30", "is_public": true, "status": "Disconnected"},
  {"id": 4, "asn_v4": 852, "latitude": null, "longitude": null, "address_v4": "75.152.0.40", "is_public": true, "status": "Connected"}
]"#;

pub fn run_example() -> CoverageReport {
    let ca = CountryCode::new("CA").unwrap();
    let rows = parse_population_estimates(POPULATION).unwrap();
    let users = parse_country_users(USERS).unwrap()[&ca];
    let capital = parse_capitals(CAPITALS).unwrap()[&ca];
    let probes = parse_probe_inventory(PROBES).unwrap();

    let set = select_dominant_networks(&rows, users, capital, Thresholds::default()).unwrap();
    compute_probe_coverage(&set, &probes)
}

fn main() {
    let report = run_example();
    println!(
        "{}: {} eyeball networks serve {:.1}% of users",
        report.country,
        report.eyeball_set.len(),
        report.eyeball_set.covered_fraction() * 100.0
    );
    for n in &report.covered_networks {
        let name = format!("AS{}", n.asn);
        println!(
            "  {name:<8} {:>2} probe(s) {:>10} users",
            n.probe_count, n.estimated_users
        );
    }
    for n in &report.uncovered_networks {
        let name = format!("AS{}", n.asn);
        println!("  {name:<8} no probe   {:>10} users", n.estimated_users);
    }
    print!("{}", write_world_csv(&coverage_world_report(&[report])));
}
