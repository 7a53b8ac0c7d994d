use opalg_cli::fixtures::{generate, FIXTURES};
use std::path::Path;

#[test]
fn bundled_fixtures_match_their_constructors() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let regen = std::env::var_os("OPALG_REGEN_FIXTURES").is_some();
    for f in FIXTURES {
        let fresh = generate(f.name)
            .unwrap()
            .expect("every bundled fixture has a constructor");
        if regen {
            std::fs::write(dir.join(format!("{}.json", f.name)), &fresh).unwrap();
        } else {
            assert_eq!(
                f.bundled, fresh,
                "fixture {} is stale; rerun with OPALG_REGEN_FIXTURES=1",
                f.name
            );
        }
    }
}

#[test]
fn unknown_names_have_no_constructor() {
    assert!(generate("no-such-fixture").unwrap().is_none());
}
