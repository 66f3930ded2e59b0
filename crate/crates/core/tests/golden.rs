//! The checked-in fixture inputs are exactly what the generator produces, so
//! they can be regenerated instead of hand-edited.

mod common;

use std::fs;

use eyeball_jedi::pipeline::files;
use eyeball_jedi::synth::canada_like;

#[test]
fn fixture_inputs_match_generator() {
    let dir = tempfile::tempdir().unwrap();
    canada_like().dataset.write_to_dir(dir.path()).unwrap();
    for name in [
        files::POPULATION,
        files::COUNTRY_USERS,
        files::CAPITALS,
        files::PROBES,
        files::TRACEROUTES,
        files::PREFIX2AS,
        files::GEO,
    ] {
        let want = fs::read_to_string(dir.path().join(name)).unwrap();
        let have = fs::read_to_string(common::fixture_dir().join(name)).unwrap();
        assert!(want == have, "{name} differs from the generator output");
    }
}
