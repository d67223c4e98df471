use std::path::Path;

use anyhow::{bail, Context, Result};
use neurosim::data::ImportOptions;
use neurosim::sysid::{ObjectiveConfig, PbhOptions};
use serde::{Deserialize, Serialize};

/// Contents of an `--options` TOML file. Every section is optional; flags
/// given on the command line override it.
///
/// ```toml
/// seed = 7
/// [objective]
/// window = 10
/// velocity_weight = 0.1
/// [pbh]
/// workers = 4
/// restarts = 20
/// [pbh.lma]
/// max_iters = 200
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptionsFile {
    pub seed: Option<u64>,
    pub objective: ObjectiveConfig,
    pub pbh: PbhOptions,
    pub import: ImportOptions,
}

impl OptionsFile {
    pub fn load(path: Option<&Path>) -> Result<(Self, Option<String>)> {
        let Some(path) = path else {
            return Ok((OptionsFile::default(), None));
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading options file {}", path.display()))?;
        let parsed: OptionsFile =
            toml::from_str(&text).with_context(|| format!("parsing options file {}", path.display()))?;
        Ok((parsed, Some(text)))
    }
}

/// Number of steps covering `duration` at `dt`; the duration must be a whole
/// number of steps.
pub fn step_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        bail!("--dt must be positive, got {dt}");
    }
    if !(duration > 0.0) || !duration.is_finite() {
        bail!("--duration must be positive, got {duration}");
    }
    let steps = (duration / dt).round();
    if (steps * dt - duration).abs() > 1e-9 * duration.max(1.0) {
        bail!("--duration {duration} is not a whole number of --dt {dt} steps");
    }
    Ok(steps as usize)
}
