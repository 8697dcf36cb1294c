//! The JSON line echoed at the start of every run.

use serde::{Deserialize, Serialize};

use crate::table::Format;

pub const TOOL: &str = "cpm";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: CommandConfig,
}

impl Header {
    pub fn new(command: CommandConfig) -> Self {
        Header {
            tool: TOOL.into(),
            version: VERSION.into(),
            command,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("header serializes")
    }

    /// Strict parse: unknown or missing fields are rejected.
    pub fn parse(line: &str) -> Result<Header, serde_json::Error> {
        serde_json::from_str(line)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "config", rename_all = "lowercase")]
pub enum CommandConfig {
    Moments(MomentsConfig),
    Rate(RateConfig),
    Compare(CompareConfig),
    Aux(AuxConfig),
    Graphsim(GraphsimConfig),
    Bell(BellConfig),
    Identities(IdentitiesConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub weights: String,
    pub k: usize,
    pub x: String,
    /// `auto`, `exact`, `log` or `finite_n`.
    pub mode: String,
    pub finite_n: Option<u64>,
    pub out: Option<String>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateConfig {
    pub weights: String,
    pub chi: f64,
    pub out: Option<String>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub weights: String,
    pub chi: f64,
    pub k_max: usize,
    pub k_step: usize,
    pub out: Option<String>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxConfig {
    pub weights: String,
    pub x: f64,
    pub u: f64,
    pub mass_tolerance: f64,
    pub llt_chi: Option<f64>,
    pub k: Option<usize>,
    pub out: Option<String>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphsimConfig {
    pub n: usize,
    pub kappa: f64,
    pub rho: f64,
    pub weights: String,
    /// Deviation levels as given on the command line.
    pub s: Vec<f64>,
    /// True when `s` is in units of the threshold.
    pub relative: bool,
    pub trials: usize,
    pub seed: u64,
    /// `flag`, `env` or `default`.
    pub seed_source: String,
    pub out: Option<String>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellConfig {
    pub k: usize,
    pub x: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesConfig {
    pub out: Option<String>,
    pub format: Format,
}
