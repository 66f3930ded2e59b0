//! From IP-level traceroutes to AS paths, locality and directness labels,
//! and the consensus verdict for the AS pair.

use eyeball_jedi::ingest::{parse_geo_table, parse_prefix_table, parse_traceroute_results};
use eyeball_jedi::path::{classify_pair, classify_traceroute, extract_as_path, PairVerdict};
use eyeball_jedi::CountryCode;

const PREFIXES: &str = "\
prefix,origin_asn
24.114.0.0/16,812
70.52.0.0/16,577
154.54.0.0/16,174
";

const GEO: &str = "\
prefix,country
24.114.0.0/16,CA
70.52.0.0/16,CA
154.54.0.0/17,CA
154.54.128.0/17,US
80.81.192.0/24,??
";

// Three measurements from AS812 to AS577: a direct handover, one through
// AS174 in Chicago, and one crossing an unannounced exchange LAN.
const TRACEROUTES: &str = r#"
{"src_probe":11,"dst_probe":21,"src_asn":812,"dst_asn":577,"dst_addr":"70.52.0.21","af":4,"timestamp":1491004800,"hops":[{"hop":1,"results":[{"from":"192.168.0.1","rtt":0.4}]},{"hop":2,"results":[{"from":"24.114.3.1","rtt":2.1}]},{"hop":3,"results":[{"x":"*"},{"x":"*"},{"x":"*"}]},{"hop":4,"results":[{"from":"70.52.0.21","rtt":6.0}]}]}
{"src_probe":12,"dst_probe":21,"src_asn":812,"dst_asn":577,"dst_addr":"70.52.0.21","af":4,"timestamp":1491004860,"hops":[{"hop":1,"results":[{"from":"24.114.7.1","rtt":1.0}]},{"hop":2,"results":[{"from":"154.54.130.9","rtt":18.2}]},{"hop":3,"results":[{"from":"70.52.0.21","rtt":31.5}]}]}
{"src_probe":12,"dst_probe":22,"src_asn":812,"dst_asn":577,"dst_addr":"70.52.0.22","af":4,"timestamp":1491004920,"hops":[{"hop":1,"results":[{"from":"24.114.7.1","rtt":1.0}]},{"hop":2,"results":[{"from":"80.81.192.5","rtt":9.7}]},{"hop":3,"results":[{"from":"70.52.0.22","rtt":12.3}]}]}
"#;

pub fn run_example() -> PairVerdict {
    let prefixes = parse_prefix_table(PREFIXES).unwrap();
    let geo = parse_geo_table(GEO).unwrap();
    let ca = CountryCode::new("CA").unwrap();
    let traceroutes = parse_traceroute_results(TRACEROUTES).unwrap();

    let mut labels = Vec::new();
    for tr in &traceroutes {
        let path = extract_as_path(tr, &prefixes).unwrap();
        let c = classify_traceroute(tr, &prefixes, &geo, ca).unwrap();
        println!(
            "#{} -> #{}: AS path [{path}], {:?}, {:?}",
            tr.src_probe, tr.dst_probe, c.locality, c.directness
        );
        labels.push(c);
    }
    classify_pair(&labels, true)
}

fn main() {
    let v = run_example();
    println!("AS812 -> AS577: {:?}, {:?}", v.locality, v.directness);
}
