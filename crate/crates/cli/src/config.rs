use std::path::PathBuf;

use serde::Deserialize;
use strichartz::estimator::{Family, SweepConfig};

use crate::error::CliError;
use crate::GlobalArgs;

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    out: Option<PathBuf>,
    seed: Option<u64>,
    exact: Option<bool>,
    #[serde(rename = "assert")]
    assert_member: Option<bool>,
    /// Overrides of the per-family sweep defaults, e.g. `{"out_space_nodes": 128}`.
    sweep: Option<serde_json::Map<String, serde_json::Value>>,
}

/// Global settings after merging the config file under the command-line flags.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub exact: bool,
    pub assert_member: bool,
    sweep: serde_json::Map<String, serde_json::Value>,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        Ok(Settings {
            out: args.out.clone().or(file.out),
            seed: args.seed.or(file.seed).unwrap_or(0),
            exact: args.exact || file.exact.unwrap_or(false),
            assert_member: args.assert_member || file.assert_member.unwrap_or(false),
            sweep: file.sweep.unwrap_or_default(),
        })
    }

    /// The family's sweep defaults with the config file's overrides applied.
    pub fn sweep_config(&self, family: Family) -> Result<SweepConfig, CliError> {
        let base = SweepConfig::for_family(family);
        if self.sweep.is_empty() {
            return Ok(base);
        }
        let mut value = serde_json::to_value(base).expect("sweep config serializes");
        let obj = value.as_object_mut().expect("sweep config is an object");
        for (k, v) in &self.sweep {
            if !obj.contains_key(k) {
                return Err(CliError::parse(format!("unknown sweep setting `{k}`")));
            }
            obj.insert(k.clone(), v.clone());
        }
        serde_json::from_value(value).map_err(|e| CliError::parse(format!("sweep settings: {e}")))
    }
}
