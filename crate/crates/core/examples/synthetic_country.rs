//! Generates a random synthetic country and writes its input files, ready
//! for the `eyeball-jedi` command line.
//!
//! `cargo run --example synthetic_country -- DIR [SEED]`; with `canada` as
//! the seed the bundled Canada-like fixture is written instead.

use std::path::PathBuf;

use eyeball_jedi::synth::{canada_like, generate, random_spec, SyntheticCountry};

pub fn run_example(seed: Option<u64>) -> SyntheticCountry {
    match seed {
        Some(seed) => generate(&random_spec(seed, 5), seed),
        None => canada_like(),
    }
}

fn main() -> std::io::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synthetic".into()));
    let seed = match args.next().as_deref() {
        None | Some("canada") => None,
        Some(s) => Some(s.parse().expect("seed must be an integer")),
    };
    let country = run_example(seed);
    country.dataset.write_to_dir(&dir)?;
    let d = &country.dataset;
    println!(
        "wrote {} networks, {} probes, {} traceroutes to {}",
        d.population.len(),
        d.probes.len(),
        d.traceroutes.len(),
        dir.display()
    );
    Ok(())
}
