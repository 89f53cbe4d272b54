//! Rows of the output tables and the run summary.

use std::collections::BTreeMap;

use mtree_spectral::BoundReport;
use serde::Serialize;

use crate::config::{PotentialConfig, TreeConfig};

/// Where a number comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Solver,
    Oracle,
    ClosedForm,
    PaperConstant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenRow {
    pub component_k: usize,
    pub multiplicity: u64,
    pub index: usize,
    pub eigenvalue: f64,
    pub bracket_width: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub instance: usize,
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub ratio: Option<f64>,
    pub satisfied: bool,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub d: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub lhs_provenance: Provenance,
    pub rhs_provenance: Provenance,
    pub constant_provenance: Provenance,
}

impl BoundRow {
    pub fn new(instance: usize, r: &BoundReport, lhs: Provenance, constant: Provenance) -> Self {
        Self {
            instance,
            name: r.name.clone(),
            lhs: r.lhs,
            rhs: r.rhs,
            constant: r.constant,
            ratio: r.ratio,
            satisfied: r.satisfied,
            gamma: r.params.gamma,
            a: r.params.a,
            p: r.params.p,
            q: r.params.q,
            d: r.params.d,
            c1: r.params.c1,
            c2: r.params.c2,
            lhs_provenance: lhs,
            rhs_provenance: Provenance::ClosedForm,
            constant_provenance: constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub grid_point: f64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub ratio: Option<f64>,
    /// Whether the point enters the sweep statistic.
    pub included: bool,
    pub lhs_provenance: Provenance,
    pub rhs_provenance: Provenance,
}

/// An instance that broke an assertion, in document form so it can be
/// pasted into a config and rerun.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub instance: usize,
    pub seed: Option<u64>,
    pub detail: String,
    pub tree: Option<TreeConfig>,
    pub potential: Option<PotentialConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
    pub violations: Vec<Violation>,
}

impl Assertion {
    pub fn single(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            checked: 1,
            detail,
            violations: Vec::new(),
        }
    }

    pub fn with_violations(name: &str, checked: usize, detail: String, violations: Vec<Violation>) -> Self {
        Self {
            name: name.into(),
            passed: violations.is_empty(),
            checked,
            detail,
            violations,
        }
    }
}

/// Everything a scenario produces.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub eigenvalues: Vec<EigenRow>,
    pub bounds: Vec<BoundRow>,
    pub sweep: Vec<SweepRow>,
    pub assertions: Vec<Assertion>,
    pub info: BTreeMap<String, serde_json::Value>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.info.insert(key.to_string(), v);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub seed: u64,
    pub passed: bool,
    pub exit_code: i32,
    pub assertions: Vec<Assertion>,
    pub info: BTreeMap<String, serde_json::Value>,
    pub files: Vec<String>,
}
