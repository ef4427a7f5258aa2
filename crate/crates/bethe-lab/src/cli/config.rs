use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::model::{ModelParams, ModelParamsJson};
use crate::transport::{McConfig, RMax, SamplerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Interval,
    Green,
    Transport,
    Indicator,
    Wavepacket,
    Plancherel,
    Ward,
    Verify,
}

impl Experiment {
    pub fn is_stochastic(&self, params: &ModelParams) -> bool {
        match self {
            Experiment::Interval | Experiment::Verify => false,
            _ => !params.is_deterministic(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RMaxJson {
    Fixed(usize),
    Named(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

impl From<RMaxJson> for RMax {
    fn from(r: RMaxJson) -> Self {
        match r {
            RMaxJson::Fixed(n) => RMax::Fixed(n),
            RMaxJson::Named(AutoTag::Auto) => RMax::Auto,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, rename = "E")]
    pub energies: Vec<f64>,
    #[serde(default)]
    pub eta: Vec<f64>,
    #[serde(default)]
    pub r_max: Option<RMaxJson>,
    /// Truncation depth of half-space samples, or the depth of the ball for `green`.
    #[serde(default)]
    pub depth: Option<usize>,
    #[serde(default)]
    pub t: Vec<f64>,
    /// Radius ℓ of Ball(ℓ) for the dense experiments.
    #[serde(default)]
    pub ball: Option<usize>,
    /// Highest shell index of the Ward checks.
    #[serde(default)]
    pub r_top: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    #[serde(default)]
    pub n_samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub sampler: SamplerConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    #[default]
    Fast,
    Full,
}

impl std::str::FromStr for VerifyLevel {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(LabError::Config(format!("unknown verify level {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOptions {
    #[serde(default)]
    pub level: VerifyLevel,
    /// Restricts the suite to one (m, n) when given; m defaults to the model's.
    #[serde(default)]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: ModelParamsJson,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub output: Outputs,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub verify: Option<VerifyOptions>,
}

/// A parsed and validated configuration.
#[derive(Clone, Debug)]
pub struct Validated {
    pub config: RunConfig,
    pub params: ModelParams,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Config(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn validate(self) -> Result<Validated> {
        let params = self.model.clone().into_params()?;
        let g = &self.grids;
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(LabError::Config(format!("{what} must be nonempty for {:?}", self.experiment))) };
        match self.experiment {
            Experiment::Interval | Experiment::Verify => {}
            Experiment::Green => {
                need(!g.energies.is_empty(), "grids.E")?;
                need(!g.eta.is_empty(), "grids.eta")?;
            }
            Experiment::Transport | Experiment::Indicator => {
                need(!g.energies.is_empty(), "grids.E")?;
                need(!g.eta.is_empty(), "grids.eta")?;
                need(g.r_max.is_some(), "grids.r_max")?;
                if let Some(RMaxJson::Fixed(0)) = g.r_max {
                    return Err(LabError::Config("grids.r_max must be >= 1".into()));
                }
            }
            Experiment::Wavepacket => {
                need(!g.t.is_empty(), "grids.t")?;
                need(g.ball.is_some(), "grids.ball")?;
            }
            Experiment::Plancherel => {
                need(!g.eta.is_empty(), "grids.eta")?;
                need(g.ball.is_some(), "grids.ball")?;
            }
            Experiment::Ward => {
                need(!g.energies.is_empty(), "grids.E")?;
                need(!g.eta.is_empty(), "grids.eta")?;
                need(g.r_top.is_some(), "grids.r_top")?;
            }
        }
        if self.experiment.is_stochastic(&params) && self.sampling.seed.is_none() {
            return Err(LabError::Config("sampling.seed is mandatory for stochastic experiments".into()));
        }
        if matches!(self.experiment, Experiment::Transport | Experiment::Indicator | Experiment::Ward) {
            let n = self.sampling.n_samples.ok_or_else(|| LabError::Config("sampling.n_samples is required".into()))?;
            if n < 2 {
                return Err(LabError::TooFewSamples(n));
            }
        }
        if self.workers == Some(0) {
            return Err(LabError::Config("workers must be a positive integer".into()));
        }
        Ok(Validated { config: self, params })
    }
}

impl Validated {
    pub fn mc(&self) -> McConfig {
        let s = &self.config.sampling;
        let mut mc = McConfig::new(s.n_samples.unwrap_or(2), s.seed.unwrap_or(0));
        mc.sampler = s.sampler;
        if self.config.grids.depth.is_some() {
            mc.sampler.depth = self.config.grids.depth;
        }
        mc
    }

    pub fn r_max(&self) -> RMax {
        self.config.grids.r_max.map(RMax::from).unwrap_or(RMax::Auto)
    }
}
