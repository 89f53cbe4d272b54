//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets, so a seed that panics fails the ordinary test suite.

use std::fs;
use std::path::PathBuf;

use mtree_cli::config::Config;
use mtree_cli::inputs::{build_potential, build_tree};
use mtree_spectral::Expr;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| {
            let p = f.unwrap().path();
            (p.display().to_string(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn expr_parse_seeds() {
    let mut parsed = 0;
    for (_, s) in seeds("expr_parse") {
        if let Ok(e) = Expr::parse(&s) {
            for t in [0.0, 0.5, 1.0, 3.0] {
                let _ = e.eval(t);
            }
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn config_seeds() {
    for (name, s) in seeds("config_toml") {
        let r = Config::from_toml(&s);
        assert_eq!(r.is_err(), name.contains("missing_tail"), "{name}: {r:?}");
    }
    for (name, s) in seeds("config_json") {
        let _ = Config::from_json(&s).map_err(|e| assert_eq!(e.exit_code(), 2, "{name}"));
    }
}

#[test]
fn scenario_input_seeds() {
    for (name, s) in seeds("scenario_inputs") {
        let Ok(c) = Config::from_toml(&s) else { continue };
        if let Some(t) = &c.tree {
            build_tree(t).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        if let Some(p) = &c.potential {
            let r = build_potential(p);
            assert_eq!(r.is_err(), name.contains("degenerate"), "{name}: {r:?}");
        }
    }
}
