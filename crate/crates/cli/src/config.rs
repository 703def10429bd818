//! Run configuration: a TOML file (or a bare scenario id) overlaid with
//! command-line settings. The fully resolved configuration is embedded in
//! `report.json` so every artifact records exactly how it was produced.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use samplab::{analysis::CHECK_NAMES, Error, Result, SCENARIO_IDS};
use serde::{Deserialize, Serialize};

/// Which artifact files a run writes. All on by default.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EmitFlags {
    pub csv: bool,
    pub report: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            csv: true,
            report: true,
            svg: true,
        }
    }
}

/// A fully resolved run: scenario id, flat numeric overrides, output
/// directory, emit flags and the list of certificate checks to evaluate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub emit: EmitFlags,
    #[serde(default)]
    pub checks: Vec<String>,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn for_scenario(id: &str) -> Self {
        Self {
            scenario: id.to_string(),
            overrides: BTreeMap::new(),
            output: default_output(),
            emit: EmitFlags::default(),
            checks: Vec::new(),
        }
    }

    /// Rejects unknown scenario ids and unknown check names up front, before
    /// any simulation work. Unknown override keys are rejected later by the
    /// scenario builder, which knows each scenario's parameter set.
    pub fn validate(&self) -> Result<()> {
        if !SCENARIO_IDS.contains(&self.scenario.as_str()) {
            return Err(Error::Config(format!(
                "unknown scenario `{}` (known: {})",
                self.scenario,
                SCENARIO_IDS.join(", ")
            )));
        }
        for c in &self.checks {
            if !CHECK_NAMES.contains(&c.as_str()) {
                return Err(Error::Config(format!(
                    "unknown check `{c}` (known: {})",
                    CHECK_NAMES.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// Loads a config from `target`, which is either a path to a TOML file or a
/// bare scenario id.
pub fn load(target: &str) -> Result<RunConfig> {
    let path = Path::new(target);
    if path.is_file() || target.ends_with(".toml") {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{target}: {e}")))
    } else {
        Ok(RunConfig::for_scenario(target))
    }
}

/// Parses a `key=value` pair from a `--set` flag.
pub fn parse_set(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("`--set {s}`: expected key=value")))?;
    let v: f64 = v
        .parse()
        .map_err(|_| Error::Parse(format!("`--set {s}`: `{v}` is not a number")))?;
    Ok((k.trim().to_string(), v))
}
