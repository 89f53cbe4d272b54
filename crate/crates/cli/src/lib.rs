//! Scenario runner for `mtree-spectral`: reads a TOML or JSON document,
//! runs one scenario, and writes CSV tables plus a JSON summary.
//!
//! Exit codes: 0 when every assertion holds, 1 when some inequality
//! fails, 2 for configuration errors, 3 for numeric or output failures.

pub mod config;
pub mod error;
pub mod inputs;
pub mod output;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use config::{Config, ScenarioName};
use error::CliError;
use report::{Outcome, Summary};

/// Command-line values that take precedence over the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub fn apply_overrides(cfg: &mut Config, o: &Overrides) -> Result<(), CliError> {
    if let Some(s) = o.seed {
        cfg.scenario.seed = s;
    }
    if let Some(t) = o.tol {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(CliError::Config(format!("--tol must be finite and non-negative, got {t}")));
        }
        cfg.scenario.tolerances.rel = t;
    }
    if let Some(d) = &o.out {
        cfg.output.dir = d.clone();
    }
    Ok(())
}

/// Runs the scenario on a pool of `jobs` threads (rayon's default when
/// `None`).
pub fn execute(name: ScenarioName, cfg: &Config, jobs: Option<usize>) -> Result<(Outcome, Summary), CliError> {
    if let Some(n) = cfg.scenario.name {
        if n != name {
            return Err(CliError::Config(format!(
                "document names scenario '{}' but '{}' was requested",
                n.as_str(),
                name.as_str()
            )));
        }
    }
    if jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Output(e.to_string()))?;
    let outcome = pool.install(|| scenario::run_scenario(name, cfg))?;
    let passed = outcome.passed();
    let summary = Summary {
        scenario: name.as_str().into(),
        seed: cfg.scenario.seed,
        passed,
        exit_code: if passed { 0 } else { 1 },
        assertions: outcome.assertions.clone(),
        info: outcome.info.clone(),
        files: Vec::new(),
    };
    Ok((outcome, summary))
}

/// Full run: execute and write outputs. Returns the summary, whose
/// `exit_code` is the process status.
pub fn run(name: ScenarioName, mut cfg: Config, o: &Overrides) -> Result<Summary, CliError> {
    apply_overrides(&mut cfg, o)?;
    let (outcome, mut summary) = execute(name, &cfg, o.jobs)?;
    summary.files = output::write_tables(&cfg.output.dir, &cfg.output.formats, &outcome)?;
    output::write_summary(&cfg.output.dir, &summary)?;
    Ok(summary)
}
