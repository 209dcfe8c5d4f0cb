use std::path::{Path, PathBuf};

use anyhow::Context;
use kgfact_core::retrieve::RetrieveConfig;
use kgfact_core::synth::SynthConfig;
use kgfact_core::verify::VerifyConfig;
use serde::{Deserialize, Serialize};

use crate::UsageError;

/// Everything a run depends on. Loaded from TOML, then overridden by flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; every random stream of the run derives from it.
    pub seed: u64,
    pub graph: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub synth: SynthConfig,
    pub verify: VerifyConfig,
    pub retrieve: RetrieveSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetrieveSection {
    /// Hop bound used by the lexical predictor.
    pub max_hops: usize,
    pub sequence_cap: usize,
    pub expansion_budget: u64,
}

impl Default for RetrieveSection {
    fn default() -> Self {
        let limits = RetrieveConfig::default();
        RetrieveSection {
            max_hops: 2,
            sequence_cap: limits.sequence_cap,
            expansion_budget: limits.expansion_budget,
        }
    }
}

impl RetrieveSection {
    pub fn limits(&self) -> RetrieveConfig {
        RetrieveConfig {
            sequence_cap: self.sequence_cap,
            expansion_budget: self.expansion_budget,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub radius: Option<usize>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> anyhow::Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str(&text)
                    .map_err(|e| UsageError(format!("config {}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(out) = &overrides.out {
            config.out = Some(out.clone());
        }
        if let Some(radius) = overrides.radius {
            config.synth.radius = radius;
        }
        config.synth.seed = config.seed;
        config
            .synth
            .validate()
            .map_err(|e| UsageError(e.to_string()))?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn out_dir(&self) -> anyhow::Result<&Path> {
        self.out.as_deref().ok_or_else(|| {
            UsageError("no output directory: pass --out or set `out` in the config".into()).into()
        })
    }
}
