#![no_main]

use libfuzzer_sys::fuzz_target;
use mtree_spectral::Expr;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(e) = Expr::parse(s) {
            for t in [0.0, 0.5, 1.0, 3.0] {
                let _ = e.eval(t);
            }
            let _ = e.kinks();
        }
    }
});
