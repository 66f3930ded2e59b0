//! Area metrics of an AS-to-AS matrix. Sixteen networks serving 84.5% of
//! users leave 1 - 0.845^2 = 28.6% of all user pairs unexamined, whatever
//! the verdicts inside the matrix are.

use std::collections::BTreeMap;

use eyeball_jedi::matrix::{cell_from_evidence, summarize, write_metrics_csv};
use eyeball_jedi::model::{Directness, Evidence, Locality, MeasurementRef, PathClassification};
use eyeball_jedi::selection::select_probes;
use eyeball_jedi::{
    build_matrix, compute_metrics, AsNumber, CountryCode, EyeballNetwork, EyeballSet, GeoPoint,
    MetricsSummary, Probe,
};

const PERCENT: [f64; 16] = [
    20.0, 15.0, 11.5, 8.0, 6.0, 4.5, 3.6, 3.0, 2.4, 2.0, 1.8, 1.6, 1.5, 1.3, 1.2, 1.1,
];

pub fn run_example() -> MetricsSummary {
    let ca = CountryCode::new("CA").unwrap();
    let ottawa = GeoPoint::new(45.42, -75.70).unwrap();
    let asns: Vec<AsNumber> = (0..16)
        .map(|i| AsNumber::new(64_500 + i).unwrap())
        .collect();
    let nets = asns
        .iter()
        .zip(PERCENT)
        .map(|(&a, p)| EyeballNetwork::new(a, ca, p / 100.0, 33_000_000).unwrap())
        .collect();
    let set = EyeballSet::new(ca, 33_000_000, ottawa, nets).unwrap();

    // one probe in every network except the fourth
    let probes: Vec<Probe> = asns
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != 3)
        .map(|(i, &a)| Probe {
            id: i as u64 + 1,
            asn_v4: Some(a),
            asn_v6: None,
            location: Some(ottawa),
            address_v4: Some([24, 0, 0, i as u8 + 1].into()),
            is_public: true,
            is_connected: true,
            country_code: Some(ca),
        })
        .collect();
    let selection = select_probes(&set, &probes);

    // every measured pair stays at home, except traffic from the largest
    // network to the second one
    let mut verdicts = BTreeMap::new();
    for &src in &asns {
        for &dst in &asns {
            if !(selection.contains(src) && selection.contains(dst)) {
                continue;
            }
            let locality = if (src, dst) == (asns[0], asns[1]) {
                Locality::OutOfCountry
            } else {
                Locality::InCountry
            };
            let evidence = vec![Evidence {
                measurement: MeasurementRef {
                    src_probe: 1,
                    dst_probe: 2,
                    timestamp: 0,
                },
                classification: PathClassification {
                    locality,
                    directness: Directness::Direct,
                },
            }];
            verdicts.insert((src, dst), cell_from_evidence(src, dst, evidence));
        }
    }
    let matrix = build_matrix(&set, &selection, &verdicts).unwrap();
    let metrics = compute_metrics(&matrix);
    for line in summarize(&matrix, &metrics) {
        println!("{line}");
    }
    metrics
}

fn main() {
    let metrics = run_example();
    print!("{}", write_metrics_csv(&metrics));
}
