//! Resolved settings of a `discover` or `effect` run. The echo embedded in
//! every output can be fed back with `--config` to repeat the run exactly.

use std::path::PathBuf;

use pcsel::discovery::ResampleConfig;
use pcsel::graph::{OrientMode, ValidityLevel};
use pcsel::inference::AdjustPolicy;
use pcsel::stats::Truncation;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OrientChoice {
    Standard,
    Majority,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AdjustChoice {
    Parents,
    TierBlock,
    Both,
}

impl AdjustChoice {
    pub fn policies(self) -> Vec<AdjustPolicy> {
        match self {
            AdjustChoice::Parents => vec![AdjustPolicy::ParentsOnly],
            AdjustChoice::TierBlock => vec![AdjustPolicy::ParentsPlusTierBlock],
            AdjustChoice::Both => vec![AdjustPolicy::ParentsOnly, AdjustPolicy::ParentsPlusTierBlock],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LevelChoice {
    Basic,
    Strict,
}

impl From<LevelChoice> for ValidityLevel {
    fn from(l: LevelChoice) -> Self {
        match l {
            LevelChoice::Basic => ValidityLevel::Basic,
            LevelChoice::Strict => ValidityLevel::Strict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    #[serde(default)]
    pub tiers: Option<String>,
    #[serde(default)]
    pub forbid: Vec<String>,
    #[serde(default)]
    pub require: Vec<String>,
    #[serde(default)]
    pub scope: Option<String>,
    #[serde(default)]
    pub exposure: Option<String>,
    #[serde(default)]
    pub outcome: Option<String>,
    pub gamma: f64,
    pub nu: f64,
    #[serde(rename = "M")]
    pub m: usize,
    /// One value, or a grid searched by the kept-percentage heuristic.
    pub c_star: Vec<f64>,
    pub max_adj: usize,
    #[serde(default)]
    pub max_cond_size: Option<usize>,
    /// Half-width of the truncated draws in standard deviations.
    #[serde(default)]
    pub truncation: Option<f64>,
    pub half_factor: bool,
    pub orient: OrientChoice,
    pub adjust: AdjustChoice,
    pub level: LevelChoice,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.nu > 0.0 && self.nu < self.gamma && self.gamma < 1.0) {
            return Err(CliError::Config(format!(
                "need 0 < nu < gamma < 1, got nu = {}, gamma = {}",
                self.nu, self.gamma
            )));
        }
        if self.c_star.is_empty() {
            return Err(CliError::Config("no c* value given".into()));
        }
        if self.c_star.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config("c* grid must be strictly increasing".into()));
        }
        Ok(())
    }

    /// Resampling settings at the first grid value.
    pub fn resample_template(&self) -> ResampleConfig {
        let max_cond = self.max_cond_size.unwrap_or(self.max_adj);
        ResampleConfig {
            nu: self.nu,
            max_adj: self.max_adj,
            max_cond_size: self.max_cond_size,
            truncation: self.truncation.map_or(Truncation::None, Truncation::Symmetric),
            half_factor: self.half_factor,
            orient_mode: match self.orient {
                OrientChoice::Standard => OrientMode::Standard,
                OrientChoice::Majority => OrientMode::Majority { max_cond_size: max_cond },
            },
            ..ResampleConfig::new(self.m, self.c_star[0], self.seed)
        }
    }
}
