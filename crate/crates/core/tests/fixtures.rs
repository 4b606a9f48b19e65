//! The checked-in cocycle files under `fixtures/` must match the in-code
//! families. Set `COCYCLE_UPDATE_FIXTURES=1` to rewrite them.

use std::path::PathBuf;

use cocycle_core::families::{z2_hom, z2_twisted, z2_twisted_corrupt, z_counterexample};
use cocycle_core::{CocycleDocument, LocalCocycle};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn check(name: &str, c: &LocalCocycle) {
    let json = CocycleDocument::from_cocycle(c).unwrap().to_json().unwrap();
    let path = fixture_dir().join(format!("{name}.cocycle.json"));
    if std::env::var_os("COCYCLE_UPDATE_FIXTURES").is_some() {
        std::fs::write(&path, &json).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, json, "{} is stale", path.display());
    let back = cocycle_core::load_cocycle(&path).unwrap();
    assert_eq!(back.rules(), c.rules());
}

#[test]
fn fixtures_are_current() {
    check("z2_hom", &z2_hom().unwrap());
    check("z2_twisted", &z2_twisted().unwrap().cocycle);
    check("z2_twisted_corrupt", &z2_twisted_corrupt().unwrap());
    check("z_counterexample", &z_counterexample().unwrap());
}
