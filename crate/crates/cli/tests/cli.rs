use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn mtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtree")).args(args).output().expect("binary runs")
}

fn run_in(sub: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    mtree(&args)
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn sample_scenarios_pass() {
    let tmp = TempDir::new().unwrap();
    for (sub, file) in [
        ("spectrum", "spectrum.toml"),
        ("bound", "bound.toml"),
        ("verify", "verify.toml"),
        ("homogeneous", "homogeneous.toml"),
        ("sobolev", "sobolev.toml"),
        ("weak-coupling", "weak-coupling.json"),
    ] {
        let out = tmp.path().join(sub);
        let o = run_in(sub, &scenarios().join(file), &out, &[]);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&o.stdout));
        let s = summary(&out);
        assert_eq!(s["passed"], true, "{sub}");
        assert!(!s["assertions"].as_array().unwrap().is_empty(), "{sub}");
    }
}

#[test]
fn spectrum_table_and_oracle_line() {
    let tmp = TempDir::new().unwrap();
    let o = run_in("spectrum", &scenarios().join("spectrum.toml"), tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS decomposition_vs_oracle"), "{stdout}");
    let table = fs::read_to_string(tmp.path().join("eigenvalues.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(
        lines.next(),
        Some("component_k,multiplicity,index,eigenvalue,bracket_width,provenance")
    );
    let rows: Vec<_> = lines.collect();
    let count = summary(tmp.path())["info"]["count"].as_u64().unwrap();
    let total: u64 = rows
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, count);
    assert!(rows.iter().all(|r| r.ends_with(",solver")));
}

#[test]
fn outputs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = scenarios().join("verify.toml");
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(run_in("verify", &cfg, &a, &["--jobs", "1", "--seed", "7"]).status.code(), Some(0));
    assert_eq!(run_in("verify", &cfg, &b, &["--jobs", "4", "--seed", "7"]).status.code(), Some(0));
    for f in ["eigenvalues.csv", "bounds.csv", "sweep.csv", "summary.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let c = tmp.path().join("c");
    run_in("verify", &cfg, &c, &["--seed", "8"]);
    assert_ne!(fs::read(a.join("bounds.csv")).unwrap(), fs::read(c.join("bounds.csv")).unwrap());
}

#[test]
fn missing_tail_rule_is_a_schema_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        &tmp,
        "bad.toml",
        "[tree]\ngenerator = \"explicit\"\nvertices = [[1.0, 2]]\n[potential]\nkind = \"piecewise\"\nbreakpoints = [0, 1]\nvalues = [1]\n",
    );
    let o = run_in("spectrum", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tail"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn other_configuration_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    let cases = [
        ("typo.toml", "[scenario]\ngama = 1\n", "verify"),
        ("mismatch.toml", "[scenario]\nname = \"weyl\"\n", "verify"),
        ("notree.toml", "[scenario]\nname = \"spectrum\"\n", "spectrum"),
        ("branch.toml", "[tree]\ngenerator = \"homogeneous\"\nbranch = 1\n[potential]\nkind = \"tent\"\ncenter = 1\nhalf_width = 1\nheight = 1\n", "spectrum"),
        ("expr.json", r#"{"tree": {"generator": "halfline"}, "potential": {"kind": "expr", "expr": "2*(t", "support": [0, 1]}}"#, "spectrum"),
        ("grid.toml", "[tree]\ngenerator = \"halfline\"\n[potential]\nkind = \"tent\"\ncenter = 1\nhalf_width = 1\nheight = 1\n[scenario]\nalpha_grid = [10.0, 1.0]\n", "weyl"),
        ("syntax.toml", "[tree\n", "spectrum"),
    ];
    for (name, text, sub) in cases {
        let cfg = write(&tmp, name, text);
        let o = run_in(sub, &cfg, &out, &[]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(mtree(&["verify"]).status.code(), Some(2));
    assert_eq!(mtree(&["frobnicate"]).status.code(), Some(2));
    let cfg = scenarios().join("verify.toml");
    assert_eq!(run_in("verify", &cfg, &out, &["--jobs", "0"]).status.code(), Some(2));
}

#[test]
fn violation_exits_1_with_replayable_instance() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        &tmp,
        "weyl.toml",
        "[tree]\ngenerator = \"halfline\"\n[potential]\nkind = \"tent\"\ncenter = 1\nhalf_width = 1\nheight = 1\n[scenario]\nalpha_grid = [4.0]\n[scenario.tolerances]\nweyl = 1e-6\n",
    );
    let out = tmp.path().join("out");
    let o = run_in("weyl", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let s = summary(&out);
    assert_eq!(s["exit_code"], 1);
    let failed: Vec<_> = s["assertions"].as_array().unwrap().iter().filter(|a| a["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    let v = &failed[0]["violations"][0];
    assert_eq!(v["tree"]["generator"], "halfline");
    assert_eq!(v["potential"]["kind"], "tent");
    assert!(fs::read_to_string(out.join("sweep.csv")).unwrap().lines().count() == 2);
}

#[test]
fn numeric_failure_exits_3() {
    let tmp = TempDir::new().unwrap();
    // a shift beyond λ_b puts the second counting route at a positive energy
    let cfg = write(
        &tmp,
        "h.toml",
        "[tree]\ngenerator = \"homogeneous\"\nbranch = 2\n[potential]\nkind = \"piecewise\"\nbreakpoints = [0, 1]\nvalues = [1]\n[scenario]\nepsilon = 10.0\n",
    );
    let o = run_in("homogeneous", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn json_tables_on_request() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        &tmp,
        "s.json",
        r#"{"tree": {"generator": "halfline"},
            "potential": {"kind": "piecewise", "breakpoints": [0, 3], "values": [4]},
            "output": {"formats": ["json", "csv"]}}"#,
    );
    let out = tmp.path().join("out");
    assert_eq!(run_in("spectrum", &cfg, &out, &[]).status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("eigenvalues.json")).unwrap()).unwrap();
    // −u″ − 4u on (0, 3) with Neumann at 0: ⌊2·3/π + 1/2⌋ = 2 bound states
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(summary(&out)["files"].as_array().unwrap().len(), 7);
}
