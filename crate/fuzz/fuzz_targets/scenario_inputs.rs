#![no_main]

//! Parsed documents through tree and potential construction.

use libfuzzer_sys::fuzz_target;
use mtree_cli::config::Config;
use mtree_cli::inputs::{build_potential, build_tree};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(c) = Config::from_toml(s) else { return };
    if let Some(t) = &c.tree {
        let _ = build_tree(t);
    }
    if let Some(p) = &c.potential {
        if let Ok(v) = build_potential(p) {
            let _ = v.value(0.5);
            let _ = v.support_end();
        }
    }
});
