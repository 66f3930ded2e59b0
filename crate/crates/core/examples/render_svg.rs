//! Draws the matrix of the bundled Canada-like country as SVG.
//!
//! `cargo run --example render_svg -- matrix.svg` writes the file; without
//! an argument the document goes to stdout.

use eyeball_jedi::render::render_svg;
use eyeball_jedi::synth::canada_like;
use eyeball_jedi::{CountryCode, Thresholds};

pub fn run_example() -> String {
    let ca = CountryCode::new("CA").unwrap();
    let analysis = canada_like()
        .dataset
        .analyze(ca, Thresholds::default())
        .unwrap();
    render_svg(&analysis.matrix)
}

fn main() -> std::io::Result<()> {
    let svg = run_example();
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}
