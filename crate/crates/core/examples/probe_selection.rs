//! Closest and farthest probe per network, measured from the capital, and the
//! traceroute plan they produce.

use std::net::Ipv4Addr;

use eyeball_jedi::plan::{build_plan, MeasurementPlan};
use eyeball_jedi::selection::{haversine_km, select_probes, ProbeSelection};
use eyeball_jedi::{AsNumber, CountryCode, EyeballNetwork, EyeballSet, GeoPoint, Probe};

fn probe(id: u64, asn: u32, lat: f64, lon: f64) -> Probe {
    Probe {
        id,
        asn_v4: Some(AsNumber::new(asn.into()).unwrap()),
        asn_v6: None,
        location: Some(GeoPoint::new(lat, lon).unwrap()),
        address_v4: Some(Ipv4Addr::new(24, 0, (id >> 8) as u8, id as u8)),
        is_public: true,
        is_connected: true,
        country_code: None,
    }
}

pub fn run_example() -> (EyeballSet, ProbeSelection, MeasurementPlan) {
    let ca = CountryCode::new("CA").unwrap();
    let ottawa = GeoPoint::new(45.4215, -75.6972).unwrap();
    let nets = [(812, 0.45), (577, 0.35), (6327, 0.15)]
        .iter()
        .map(|&(a, f)| EyeballNetwork::new(AsNumber::new(a).unwrap(), ca, f, 33_000_000).unwrap())
        .collect();
    let set = EyeballSet::new(ca, 33_000_000, ottawa, nets).unwrap();

    let probes = vec![
        probe(11, 812, 45.42, -75.69),   // Ottawa
        probe(12, 812, 43.65, -79.38),   // Toronto
        probe(13, 812, 49.28, -123.12),  // Vancouver
        probe(21, 577, 45.50, -73.57),   // Montreal
        probe(22, 577, 44.65, -63.57),   // Halifax
        probe(31, 6327, 51.05, -114.07), // Calgary, the only one
    ];
    let selection = select_probes(&set, &probes);
    let plan = build_plan(&set, &selection);
    (set, selection, plan)
}

fn main() {
    let (set, selection, plan) = run_example();
    let capital = set.capital();
    for net in set.networks() {
        let Some(s) = selection.get(net.asn) else {
            println!("AS{}: no probe", net.asn);
            continue;
        };
        let km = |p: &Probe| haversine_km(capital, p.location.unwrap());
        println!(
            "AS{}: closest #{} ({:.0} km), farthest #{} ({:.0} km)",
            net.asn,
            s.closest.id,
            km(&s.closest),
            s.farthest.id,
            km(&s.farthest)
        );
    }
    println!("{} traceroute tasks", plan.tasks.len());
}
