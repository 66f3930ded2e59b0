//! Full offline run on the bundled Canada-like synthetic country: coverage,
//! probe selection, plan, traceroute classification, matrix and metrics.

use eyeball_jedi::matrix::summarize;
use eyeball_jedi::synth::canada_like;
use eyeball_jedi::{Analysis, CountryCode, Thresholds};

pub fn run_example() -> Analysis {
    let country = canada_like();
    let ca = CountryCode::new("CA").unwrap();
    country
        .dataset
        .analyze(ca, Thresholds::default())
        .expect("fixture is complete")
}

fn main() {
    let analysis = run_example();
    println!(
        "{} traceroutes matched {} plan tasks ({} skipped)",
        analysis.matched,
        analysis.plan.tasks.len(),
        analysis.warnings.len()
    );
    for line in summarize(&analysis.matrix, &analysis.metrics) {
        println!("{line}");
    }
}
