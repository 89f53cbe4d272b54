//! The scenario document. TOML unless the file name ends in `.json`.
//!
//! ```toml
//! [tree]
//! generator = "homogeneous"   # homogeneous | geometric | halfline | explicit
//! edge_length = 1.0
//! branch = 2
//!
//! [potential]
//! kind = "piecewise"          # piecewise | expr | tent
//! breakpoints = [0.0, 2.0]
//! values = [5.0]
//!
//! [scenario]
//! name = "spectrum"
//! seed = 0
//!
//! [output]
//! dir = "out"
//! formats = ["csv"]
//! ```
//!
//! Random instances (the `verify` scenario) come from a ChaCha8 generator
//! seeded with `seed + i` for instance `i`. Potentials are piecewise
//! constant with up to `corpus.potential.max_pieces` pieces, depths drawn
//! uniformly from `corpus.potential.depth`, breakpoints drawn uniformly
//! from `corpus.potential.support`. Trees have up to
//! `corpus.max_generations` explicit vertices with branching numbers from
//! `corpus.branches` and a homogeneous tail.

use std::path::{Path, PathBuf};

use mtree_spectral::corpus::PotentialSpec;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tree: Option<TreeConfig>,
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TreeConfig {
    Homogeneous {
        #[serde(default = "one")]
        edge_length: f64,
        branch: u32,
    },
    Geometric {
        ratio: f64,
        #[serde(default = "one")]
        first_length: f64,
        branch: u32,
    },
    Halfline {},
    /// Vertices `[radius, branching]` followed by a mandatory tail rule.
    Explicit {
        vertices: Vec<(f64, u32)>,
        tail: TailConfig,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TailConfig {
    Homogeneous { edge_length: f64, branch: u32 },
    Geometric { ratio: f64, first_length: f64, branch: u32 },
    Halfline {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    /// `values[i]` on `(breakpoints[i], breakpoints[i+1]]`.
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64> },
    /// Expression in `t` on `[support[0], support[1]]`, zero outside.
    Expr { expr: String, support: [f64; 2] },
    /// `height·max(0, 1 − |t − center|/half_width)`.
    Tent { center: f64, half_width: f64, height: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Spectrum,
    Bound,
    Verify,
    Homogeneous,
    Sobolev,
    Weyl,
    WeakCoupling,
}

impl ScenarioName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Bound => "bound",
            Self::Verify => "verify",
            Self::Homogeneous => "homogeneous",
            Self::Sobolev => "sobolev",
            Self::Weyl => "weyl",
            Self::WeakCoupling => "weak-coupling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Must match the subcommand when given.
    pub name: Option<ScenarioName>,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    /// Global dimension; defaults to the tree's own when it has one.
    pub d: Option<f64>,
    /// Sobolev exponent; `"inf"` (or TOML `inf`) for q = ∞.
    #[serde(serialize_with = "ser_opt_real", deserialize_with = "de_opt_real")]
    pub q: Option<f64>,
    pub beta: Option<f64>,
    /// Exponent of the CLR weight `w(t) = (1+t)^w`.
    pub w: Option<f64>,
    pub alpha_grid: Option<Vec<f64>>,
    /// Number of random instances or trial functions.
    pub seeds: Option<u64>,
    pub seed: u64,
    /// Shift below λ_b used by the second homogeneous counting route.
    pub epsilon: f64,
    /// Run the direct tree oracle next to the decomposition.
    pub oracle: bool,
    pub tolerances: Tolerances,
    pub corpus: CorpusConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: None,
            gamma: None,
            a: None,
            d: None,
            q: None,
            beta: None,
            w: None,
            alpha_grid: None,
            seeds: None,
            seed: 0,
            epsilon: 1e-9,
            oracle: true,
            tolerances: Tolerances::default(),
            corpus: CorpusConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative slack on every `lhs ≤ rhs` assertion.
    pub rel: f64,
    /// Allowed `|ratio − 1|` at the last Weyl grid point.
    pub weyl: f64,
    /// Allowed distance between fitted and predicted weak coupling slope.
    pub slope: f64,
    /// Ground state residual bound.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            weyl: 0.15,
            slope: 0.5,
            residual: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub potential: PotentialSpec,
    pub max_generations: usize,
    pub branches: Vec<u32>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            potential: PotentialSpec {
                support: (0.0, 3.5),
                max_pieces: 4,
                ..PotentialSpec::default()
            },
            max_generations: 3,
            branches: vec![2, 3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![Format::Csv],
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Real {
    Num(f64),
    Text(String),
}

fn de_opt_real<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    match Option::<Real>::deserialize(d)? {
        None => Ok(None),
        Some(Real::Num(x)) => Ok(Some(x)),
        Some(Real::Text(s)) => match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(Some(f64::INFINITY)),
            other => other
                .parse()
                .map(Some)
                .map_err(|_| serde::de::Error::custom(format!("expected a number or \"inf\", got \"{s}\""))),
        },
    }
}

fn ser_opt_real<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) if v.is_infinite() => s.serialize_some("inf"),
        Some(v) => s.serialize_some(v),
        None => s.serialize_none(),
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|x| x.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml() {
        let c = Config::from_toml(
            "[tree]\ngenerator = \"homogeneous\"\nbranch = 2\n[potential]\nkind = \"piecewise\"\nbreakpoints = [0, 2]\nvalues = [5]\n",
        )
        .unwrap();
        assert_eq!(c.tree, Some(TreeConfig::Homogeneous { edge_length: 1.0, branch: 2 }));
        assert_eq!(c.scenario, ScenarioConfig::default());
    }

    #[test]
    fn explicit_tree_needs_a_tail() {
        let e = Config::from_toml("[tree]\ngenerator = \"explicit\"\nvertices = [[1.0, 2]]\n").unwrap_err();
        assert!(e.to_string().contains("tail"), "{e}");
        let ok = Config::from_toml(
            "[tree]\ngenerator = \"explicit\"\nvertices = [[1.0, 2]]\ntail = { rule = \"homogeneous\", edge_length = 1.0, branch = 3 }\n",
        );
        assert!(ok.is_ok(), "{ok:?}");
    }

    #[test]
    fn infinite_q() {
        let c = Config::from_toml("[scenario]\nq = \"inf\"\n").unwrap();
        assert_eq!(c.scenario.q, Some(f64::INFINITY));
        let c = Config::from_toml("[scenario]\nq = inf\n").unwrap();
        assert_eq!(c.scenario.q, Some(f64::INFINITY));
        let c = Config::from_json(r#"{"scenario": {"q": "inf"}}"#).unwrap();
        assert_eq!(c.scenario.q, Some(f64::INFINITY));
        let back = serde_json::to_string(&c.scenario).unwrap();
        assert!(back.contains(r#""q":"inf""#), "{back}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(Config::from_toml("[scenario]\ngama = 1\n").is_err());
        assert!(Config::from_toml("[tree]\ngenerator = \"halfline\"\nbranch = 2\n").is_err());
    }
}
