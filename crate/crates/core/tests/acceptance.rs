//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. `UPDATE_GOLDEN=1` rewrites the golden outputs.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::net::{IpAddr, Ipv4Addr};
use std::process::Command;
use std::time::{Duration, Instant};

use eyeball_jedi::coverage::select_dominant_networks;
use eyeball_jedi::ingest::PopulationEstimateRow;
use eyeball_jedi::matrix::build_matrix;
use eyeball_jedi::model::EyeballNetwork;
use eyeball_jedi::selection::{haversine_km, ProbeSelection, SelectedProbes};
use eyeball_jedi::synth::{self, HopKind, HopLocation, RouteTruth};
use eyeball_jedi::{
    compute_metrics, AsNumber, CellVerdict, CountryCode, DirectnessVerdict, EyeballSet, GeoPoint,
    LocalityVerdict, PrefixTable, Probe, Thresholds,
};
use ipnet::{IpNet, Ipv4Net};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn asn(n: u64) -> AsNumber {
    AsNumber::new(n).unwrap()
}

fn cc(s: &str) -> CountryCode {
    CountryCode::new(s).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 -----------------------------------------------------------------------

fn canada_unexamined() -> Outcome {
    let start = Instant::now();
    let data = synth::canada_like().dataset;
    let analysis = data
        .analyze(cc("CA"), Thresholds::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let set = analysis.matrix.eyeball_set();
    check(set.len() == 16, || format!("{} networks", set.len()))?;
    check(
        set.networks().iter().all(|n| n.user_fraction >= 0.01),
        || "fraction below 0.01".into(),
    )?;
    check((set.covered_fraction() - 0.845).abs() < 1e-9, || {
        format!("covered fraction {}", set.covered_fraction())
    })?;
    let u = analysis.metrics.unexamined;
    check((u - 0.28598).abs() <= 0.001, || format!("unexamined {u}"))?;
    check(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("unexamined {u:.5} in {elapsed:.0?}"))
}

// 2 -----------------------------------------------------------------------

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> EyeballSet {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let scale = rng.random_range(0.05..=1.0) / raw.iter().sum::<f64>();
    let mut nets: Vec<(f64, u64)> = raw
        .iter()
        .enumerate()
        .map(|(i, f)| (f * scale, 1000 + i as u64))
        .collect();
    nets.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let networks = nets
        .into_iter()
        .map(|(f, a)| EyeballNetwork::new(asn(a), cc("CA"), f.min(1.0), 1_000_000).unwrap())
        .collect();
    EyeballSet::new(
        cc("CA"),
        1_000_000,
        GeoPoint::new(45.0, -75.0).unwrap(),
        networks,
    )
    .unwrap()
}

fn dummy_probe(id: u64, a: AsNumber) -> Probe {
    Probe {
        id,
        asn_v4: Some(a),
        asn_v6: None,
        location: Some(GeoPoint::new(45.0, -75.0).unwrap()),
        address_v4: Some(Ipv4Addr::new(10, 0, 0, 1)),
        is_public: true,
        is_connected: true,
        country_code: None,
    }
}

fn metrics_partition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    const TRIALS: usize = 1000;
    let localities = [
        LocalityVerdict::InCountry,
        LocalityVerdict::OutOfCountry,
        LocalityVerdict::Inconsistent,
        LocalityVerdict::Undetermined,
    ];
    let directions = [
        DirectnessVerdict::Direct,
        DirectnessVerdict::Indirect,
        DirectnessVerdict::Mixed,
        DirectnessVerdict::NotApplicable,
    ];
    for trial in 0..TRIALS {
        let n = rng.random_range(1..=30);
        let set = random_set(&mut rng, n);
        let nets = set.networks();
        let covered: Vec<bool> = (0..n).map(|_| rng.random_bool(0.8)).collect();
        let per_asn = nets
            .iter()
            .zip(&covered)
            .filter(|(_, c)| **c)
            .map(|(net, _)| {
                let p = dummy_probe(net.asn.get() as u64, net.asn);
                (
                    net.asn,
                    SelectedProbes {
                        closest: p.clone(),
                        farthest: p,
                    },
                )
            })
            .collect();
        let selection = ProbeSelection {
            country: cc("CA"),
            per_asn,
        };
        let mut verdicts = BTreeMap::new();
        // oracle bins: in, out, inconsistent, undetermined, no coverage
        let mut bins = [0.0f64; 5];
        let mut indirect = 0.0;
        for (i, r) in nets.iter().enumerate() {
            for (j, c) in nets.iter().enumerate() {
                let w = r.user_fraction * c.user_fraction;
                if !(covered[i] && covered[j]) {
                    bins[4] += w;
                    continue;
                }
                let li = rng.random_range(0..localities.len());
                let d = directions[rng.random_range(0..directions.len())];
                bins[li] += w;
                if d == DirectnessVerdict::Indirect {
                    indirect += w;
                }
                verdicts.insert(
                    (r.asn, c.asn),
                    CellVerdict {
                        src_asn: r.asn,
                        dst_asn: c.asn,
                        locality: localities[li],
                        directness: d,
                        area_weight: 0.0,
                        evidence: Vec::new(),
                    },
                );
            }
        }
        let m =
            compute_metrics(&build_matrix(&set, &selection, &verdicts).map_err(|e| e.to_string())?);
        let total: f64 = nets.iter().map(|x| x.user_fraction).sum();
        let unexamined = 1.0 - total * total;
        let sum = m.in_country
            + m.out_of_country
            + m.inconsistent
            + m.undetermined
            + m.no_coverage
            + m.unexamined;
        check((sum - 1.0).abs() <= 1e-9, || {
            format!("trial {trial}: partition sums to {sum}")
        })?;
        let pairs = [
            (m.in_country, bins[0]),
            (m.out_of_country, bins[1]),
            (m.inconsistent, bins[2]),
            (m.undetermined, bins[3]),
            (m.no_coverage, bins[4]),
            (m.unexamined, unexamined),
            (m.indirect, indirect),
        ];
        for (k, (got, want)) in pairs.iter().enumerate() {
            check((got - want).abs() <= 1e-12, || {
                format!("trial {trial} category {k}: {got} vs {want}")
            })?;
        }
    }
    Ok(format!("{TRIALS} matrices"))
}

// 3 -----------------------------------------------------------------------

fn lpm_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    const TABLES: usize = 120;
    const LOOKUPS: usize = 1000;
    for t in 0..TABLES {
        let size = rng.random_range(1..=500);
        let mut table = PrefixTable::new();
        let mut oracle: Vec<(Ipv4Net, AsNumber)> = Vec::new();
        for _ in 0..size {
            // half the prefixes refine an existing one
            let net = match oracle.choose_nested(&mut rng) {
                Some(parent) if parent.prefix_len() < 32 => {
                    let len = rng.random_range(parent.prefix_len() + 1..=32);
                    let host: u32 = rng.random();
                    let mask = u32::MAX >> parent.prefix_len();
                    let bits = (u32::from(parent.network()) & !mask) | (host & mask);
                    Ipv4Net::new(bits.into(), len).unwrap().trunc()
                }
                _ => Ipv4Net::new(rng.random::<u32>().into(), rng.random_range(0..=32))
                    .unwrap()
                    .trunc(),
            };
            let value = asn(rng.random_range(1..100_000));
            table.insert(IpNet::V4(net), value);
            oracle.retain(|(n, _)| *n != net);
            oracle.push((net, value));
        }
        check(table.len() == oracle.len(), || {
            format!("table {t}: size {} vs {}", table.len(), oracle.len())
        })?;
        for _ in 0..LOOKUPS {
            let addr: Ipv4Addr = if rng.random_bool(0.7) {
                let (net, _) = oracle[rng.random_range(0..oracle.len())];
                let mask = u32::MAX.checked_shr(net.prefix_len() as u32).unwrap_or(0);
                (u32::from(net.network()) | (rng.random::<u32>() & mask)).into()
            } else {
                rng.random::<u32>().into()
            };
            let want = oracle
                .iter()
                .filter(|(n, _)| n.contains(&addr))
                .max_by_key(|(n, _)| n.prefix_len())
                .map(|(_, v)| *v);
            let got = table.lookup(IpAddr::V4(addr)).copied();
            check(got == want, || {
                format!("table {t}: {addr} -> {got:?}, oracle {want:?}")
            })?;
        }
    }
    Ok(format!("{TABLES} tables x {LOOKUPS} lookups"))
}

trait ChooseNested {
    fn choose_nested(&self, rng: &mut ChaCha8Rng) -> Option<Ipv4Net>;
}

impl ChooseNested for Vec<(Ipv4Net, AsNumber)> {
    fn choose_nested(&self, rng: &mut ChaCha8Rng) -> Option<Ipv4Net> {
        if self.is_empty() || rng.random_bool(0.5) {
            None
        } else {
            Some(self[rng.random_range(0..self.len())].0)
        }
    }
}

// 4 -----------------------------------------------------------------------

fn rows_of(fractions: &[(u64, f64)]) -> Vec<PopulationEstimateRow> {
    fractions
        .iter()
        .map(|&(a, f)| PopulationEstimateRow {
            country: cc("CA"),
            asn: asn(a),
            fraction_percent: f * 100.0,
        })
        .collect()
}

fn admitted(fractions: &[(u64, f64)], t: Thresholds) -> Result<Vec<AsNumber>, String> {
    let set = select_dominant_networks(
        &rows_of(fractions),
        1_000_000,
        GeoPoint::new(0.0, 0.0).unwrap(),
        t,
    )
    .map_err(|e| e.to_string())?;
    Ok(set.networks().iter().map(|n| n.asn).collect())
}

fn selection_rule() -> Outcome {
    let t = Thresholds {
        cumulative_cap: 0.95,
        per_as_floor: 0.01,
    };
    let three = admitted(&[(1, 0.5), (2, 0.3), (3, 0.2)], t)?;
    check(three == vec![asn(1), asn(2), asn(3)], || {
        format!("[0.5,0.3,0.2] -> {three:?}")
    })?;
    let two = admitted(&[(1, 0.6), (2, 0.4)], t)?;
    check(two == vec![asn(1), asn(2)], || {
        format!("[0.6,0.4] -> {two:?}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    const TRIALS: usize = 2000;
    for trial in 0..TRIALS {
        let n = rng.random_range(1..=25);
        // hundredths make ties common
        let mut fr: Vec<(u64, f64)> = (0..n)
            .map(|i| (1 + i as u64 * 3, rng.random_range(0..=30) as f64 / 100.0))
            .collect();
        let t = Thresholds {
            cumulative_cap: rng.random_range(1..=100) as f64 / 100.0,
            per_as_floor: rng.random_range(1..=20) as f64 / 100.0,
        };
        let got = admitted(&fr, t)?;
        let mut sorted = fr.clone();
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let frac = |a: AsNumber| fr.iter().find(|x| asn(x.0) == a).unwrap().1;
        check(got.iter().all(|a| frac(*a) >= t.per_as_floor), || {
            format!("trial {trial}: admitted below floor")
        })?;
        check(got.iter().zip(&sorted).all(|(a, s)| *a == asn(s.0)), || {
            format!("trial {trial}: not a prefix of the sorted list")
        })?;
        // the rule enumerated directly
        let mut want = Vec::new();
        let mut cum = 0.0;
        for &(a, f) in &sorted {
            if f < t.per_as_floor || cum >= t.cumulative_cap {
                break;
            }
            want.push(asn(a));
            cum += f;
        }
        check(got == want, || {
            format!("trial {trial}: {got:?} vs {want:?}")
        })?;
        fr.shuffle(&mut rng);
        let again = admitted(&fr, t)?;
        check(again == got, || {
            format!("trial {trial}: depends on input order")
        })?;
    }
    Ok(format!("worked examples + {TRIALS} random inputs"))
}

// 5 -----------------------------------------------------------------------

/// Great-circle distance by the spherical law of cosines.
fn cosine_law_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.latitude().to_radians(), b.latitude().to_radians());
    let dl = (b.longitude() - a.longitude()).to_radians();
    let c = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    6371.0 * c.clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RefLoc {
    In,
    Out,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RefDir {
    Direct,
    Indirect,
    Unknown,
}

fn reference_labels(route: &RouteTruth) -> (RefLoc, RefDir) {
    let public: Vec<_> = route
        .hops
        .iter()
        .filter(|h| matches!(h.kind, HopKind::Mapped(_) | HopKind::UnmappedPublic))
        .collect();
    let loc = if public.iter().any(|h| h.location == HopLocation::Abroad) {
        RefLoc::Out
    } else if public.iter().any(|h| h.location == HopLocation::Home) {
        RefLoc::In
    } else {
        RefLoc::Unknown
    };

    // None marks an unannounced hop
    let mut seq: Vec<Option<AsNumber>> = vec![Some(route.src_asn)];
    seq.extend(public.iter().map(|h| match h.kind {
        HopKind::Mapped(a) => Some(a),
        _ => None,
    }));
    seq.push(Some(route.dst_asn));
    let third = seq
        .iter()
        .flatten()
        .any(|a| *a != route.src_asn && *a != route.dst_asn);
    let open_gap = (0..seq.len()).any(|i| {
        seq[i].is_none() && {
            let before = seq[..i].iter().rev().flatten().next();
            let after = seq[i + 1..].iter().flatten().next();
            before != after
        }
    });
    let dir = if third {
        RefDir::Indirect
    } else if open_gap {
        RefDir::Unknown
    } else {
        RefDir::Direct
    };
    (loc, dir)
}

fn reference_cell(labels: &[(RefLoc, RefDir)]) -> (LocalityVerdict, DirectnessVerdict) {
    let locs: BTreeSet<_> = labels
        .iter()
        .filter(|l| l.0 != RefLoc::Unknown)
        .map(|l| l.0 as u8)
        .collect();
    let dirs: BTreeSet<_> = labels
        .iter()
        .filter(|l| l.1 != RefDir::Unknown)
        .map(|l| l.1 as u8)
        .collect();
    let loc = match locs.len() {
        0 => LocalityVerdict::Undetermined,
        2 => LocalityVerdict::Inconsistent,
        _ if locs.contains(&(RefLoc::In as u8)) => LocalityVerdict::InCountry,
        _ => LocalityVerdict::OutOfCountry,
    };
    let dir = match dirs.len() {
        0 => DirectnessVerdict::NotApplicable,
        2 => DirectnessVerdict::Mixed,
        _ if dirs.contains(&(RefDir::Direct as u8)) => DirectnessVerdict::Direct,
        _ => DirectnessVerdict::Indirect,
    };
    (loc, dir)
}

type RefMatrix = Vec<(AsNumber, AsNumber, LocalityVerdict, DirectnessVerdict)>;

/// Verdicts for every ordered pair, derived from the generating topology
/// without using the library's selection, planning or classification code.
fn reference_matrix(
    country: &synth::SyntheticCountry,
    cc: CountryCode,
    t: Thresholds,
) -> RefMatrix {
    let data = &country.dataset;
    let mut cands: Vec<(f64, AsNumber)> = data
        .population
        .iter()
        .filter(|r| r.country == cc)
        .map(|r| (r.fraction_percent / 100.0, r.asn))
        .collect();
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut members = Vec::new();
    let mut cum = 0.0;
    for (f, a) in cands {
        if f < t.per_as_floor || cum >= t.cumulative_cap {
            break;
        }
        members.push(a);
        cum += f;
    }

    let capital = data.capitals[&cc];
    let mut chosen: BTreeMap<AsNumber, BTreeSet<u64>> = BTreeMap::new();
    for &a in &members {
        let mut near: Option<(f64, u64)> = None;
        let mut far: Option<(f64, u64)> = None;
        for p in &data.probes {
            let usable = p.is_public
                && p.is_connected
                && p.address_v4.is_some()
                && p.asn_v4 == Some(a)
                && p.country_code.is_none_or(|c| c == cc);
            let Some(loc) = p.location.filter(|_| usable) else {
                continue;
            };
            let d = cosine_law_km(capital, loc);
            if near.is_none_or(|(nd, nid)| d < nd || (d == nd && p.id < nid)) {
                near = Some((d, p.id));
            }
            if far.is_none_or(|(fd, fid)| d > fd || (d == fd && p.id < fid)) {
                far = Some((d, p.id));
            }
        }
        if let (Some(n), Some(f)) = (near, far) {
            chosen.insert(a, [n.1, f.1].into());
        }
    }

    let mut by_pair: BTreeMap<(AsNumber, AsNumber), Vec<(RefLoc, RefDir)>> = BTreeMap::new();
    for route in &country.routes {
        let planned = chosen
            .get(&route.src_asn)
            .is_some_and(|s| s.contains(&route.src_probe))
            && chosen
                .get(&route.dst_asn)
                .is_some_and(|s| s.contains(&route.dst_probe))
            && route.src_probe != route.dst_probe;
        if planned {
            by_pair
                .entry((route.src_asn, route.dst_asn))
                .or_default()
                .push(reference_labels(route));
        }
    }

    let mut out = Vec::new();
    for &r in &members {
        for &c in &members {
            let (loc, dir) = if chosen.contains_key(&r) && chosen.contains_key(&c) {
                reference_cell(by_pair.get(&(r, c)).map(Vec::as_slice).unwrap_or(&[]))
            } else {
                (
                    LocalityVerdict::NoCoverage,
                    DirectnessVerdict::NotApplicable,
                )
            };
            out.push((r, c, loc, dir));
        }
    }
    out
}

fn classification_oracle() -> Outcome {
    const TOPOLOGIES: u64 = 60;
    let mut cells = 0;
    let mut kinds = BTreeSet::new();
    for seed in 0..TOPOLOGIES {
        let spec = synth::random_spec(seed, 5);
        let country = synth::generate(&spec, seed);
        let want = reference_matrix(&country, spec.country, spec.thresholds);
        let got: RefMatrix = match country.dataset.analyze(spec.country, spec.thresholds) {
            Ok(a) => a
                .matrix
                .cells()
                .iter()
                .map(|c| (c.src_asn, c.dst_asn, c.locality, c.directness))
                .collect(),
            // an empty eyeball set is fine as long as the reference agrees
            Err(_) if want.is_empty() => Vec::new(),
            Err(e) => return Err(format!("seed {seed}: {e}")),
        };
        check(got.len() == want.len(), || {
            format!("seed {seed}: {} cells vs {}", got.len(), want.len())
        })?;
        for (g, w) in got.iter().zip(&want) {
            check(g == w, || {
                format!("seed {seed}: library {g:?}, reference {w:?}")
            })?;
            kinds.insert((w.2, w.3));
        }
        cells += want.len();
    }
    check(kinds.len() >= 6, || {
        format!("only {} verdict kinds exercised", kinds.len())
    })?;
    Ok(format!(
        "{TOPOLOGIES} topologies, {cells} cells, {} verdict kinds",
        kinds.len()
    ))
}

// 6 -----------------------------------------------------------------------

fn haversine() -> Outcome {
    let pt = |lat, lon| GeoPoint::new(lat, lon).unwrap();
    let paris = pt(48.8566, 2.3522);
    let london = pt(51.5074, -0.1278);
    let same = haversine_km(paris, paris);
    check(same == 0.0, || format!("a=b gives {same}"))?;
    let anti = haversine_km(pt(0.0, 0.0), pt(0.0, 180.0));
    check((anti - 6371.0 * std::f64::consts::PI).abs() < 0.1, || {
        format!("antipodes {anti}")
    })?;
    let got = haversine_km(paris, london);
    let want = cosine_law_km(paris, london);
    check((got - want).abs() / want < 0.01, || {
        format!("Paris-London {got} vs {want}")
    })?;
    Ok(format!("Paris-London {got:.1} km"))
}

// 7 -----------------------------------------------------------------------

fn golden_run() -> Outcome {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = common::fixture_dir().join("eyeball-jedi.toml");
    let start = Instant::now();
    for cmd in ["analyze", "render"] {
        let o = Command::new(env!("CARGO_BIN_EXE_eyeball-jedi"))
            .arg(cmd)
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(out.path())
            .output()
            .map_err(|e| e.to_string())?;
        check(o.status.success(), || {
            format!(
                "{cmd} exited {:?}: {}",
                o.status.code(),
                String::from_utf8_lossy(&o.stderr)
            )
        })?;
    }
    let elapsed = start.elapsed();
    let golden = common::golden_dir();
    let names = ["matrix_CA.json", "metrics_CA.csv", "matrix_CA.svg"];
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(&golden).map_err(|e| e.to_string())?;
        for name in names {
            fs::copy(out.path().join(name), golden.join(name)).map_err(|e| e.to_string())?;
        }
    }
    for name in names {
        let got = fs::read(out.path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        let want = fs::read(golden.join(name)).map_err(|e| format!("golden {name}: {e}"))?;
        check(got == want, || format!("{name} differs from golden"))?;
    }
    check(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("3 files identical, {elapsed:.0?}"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("16-network unexamined area", canada_unexamined),
        ("area partition and double-loop oracle", metrics_partition),
        ("longest-prefix match vs linear scan", lpm_oracle),
        ("dominant network selection rule", selection_rule),
        (
            "cell verdicts vs reference classifier",
            classification_oracle,
        ),
        ("great-circle distance", haversine),
        ("golden end-to-end run", golden_run),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "SKIP 8. live-data figures: the published global and per-country percentages depend on \
         external snapshots that are not available offline"
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
