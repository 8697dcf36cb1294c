//! `--weights` parsing.

use std::fs;
use std::path::Path;

use cpm_core::{Number, WeightModel};
use serde::Deserialize;

use crate::error::{CliError, Context};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomFile {
    moments: Vec<serde_json::Value>,
}

fn number(s: &str, what: &str) -> Result<Number, CliError> {
    Number::parse(s.trim()).map_err(|_| CliError::usage(format!("{what}: `{s}` is not a number")))
}

/// Parses `unit | gaussian:V2 | gamma:m,theta | bernoulli | exponential |
/// logfact | custom:path.json`, optionally wrapped as `hat:<model>` or
/// `tilde:<model>`.
pub fn parse_weights(spec: &str) -> Result<WeightModel, CliError> {
    let ctx = || format!("--weights {spec}");
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    let model = match (head, rest) {
        ("unit", None) => WeightModel::unit(),
        ("bernoulli", None) => WeightModel::bernoulli_centered(),
        ("exponential", None) => WeightModel::exponential(),
        ("logfact", None) => WeightModel::log_factorial(),
        ("gaussian", Some(v2)) => WeightModel::gaussian_centered(number(v2, "gaussian V2")?).context(ctx)?,
        ("gamma", Some(params)) => {
            let (m, theta) = params
                .split_once(',')
                .ok_or_else(|| CliError::usage("gamma expects `gamma:m,theta`"))?;
            WeightModel::gamma(number(m, "gamma m")?, number(theta, "gamma theta")?).context(ctx)?
        }
        ("custom", Some(path)) => read_custom(Path::new(path))?,
        ("hat", Some(inner)) => parse_weights(inner)?.hat_transform(),
        ("tilde", Some(inner)) => parse_weights(inner)?.tilde_transform(),
        _ => {
            return Err(CliError::usage(format!(
                "unknown weight model `{spec}`; expected unit, gaussian:V2, gamma:m,theta, bernoulli, exponential, logfact or custom:path.json"
            )))
        }
    };
    Ok(model)
}

fn read_custom(path: &Path) -> Result<WeightModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: CustomFile =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let moments = file
        .moments
        .iter()
        .map(|v| match v {
            serde_json::Value::Number(n) => number(&n.to_string(), "custom moment"),
            serde_json::Value::String(s) => number(s, "custom moment"),
            other => Err(CliError::usage(format!("custom moment `{other}` is not a number"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    WeightModel::custom(moments).context(|| format!("custom:{}", path.display()))
}
