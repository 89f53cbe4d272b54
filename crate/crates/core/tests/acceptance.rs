//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

mod acc;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let checks: Vec<(usize, &str, Check)> = vec![
        (1, "tree count vs direct tree oracle", acc::c01_tree_oracle),
        (2, "half-line count vs FEM oracle", acc::c02_halfline_oracle),
        (3, "sharp CLR bound and sharpness witness", acc::c03_sharp_clr),
        (4, "CLR with explicit constants on d = 3 trees", acc::c04_clr_constants),
        (5, "universal LT at gamma = 1/2 with constant 1", acc::c05_universal_lt),
        (6, "Weyl limit", acc::c06_weyl),
        (7, "weak coupling exponent", acc::c07_weak_coupling),
        (8, "homogeneous tree", acc::c08_homogeneous),
        (9, "Sobolev interpolation suite", acc::c09_sobolev),
        (10, "Dirichlet sandwich and interlacing", acc::c10_sandwich),
        (11, "one-bound-state threshold", acc::c11_one_bound_state),
    ];
    let selected: Vec<_> = checks.into_iter().filter(|c| only.is_none_or(|o| o == c.0)).collect();
    let results: Vec<(usize, &str, Result<String, String>, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(n, name, f)| {
                s.spawn(move || {
                    let t0 = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
                        let msg = e
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        Err(format!("panicked: {msg}"))
                    });
                    (n, name, r, t0.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    let mut failed = 0;
    for (n, name, r, secs) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
