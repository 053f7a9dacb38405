use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    compute_l, compute_tau, pc_stable_tiered, resample_threshold, DiscoveryResult, FisherZTable,
    Noise, PcOptions, ResampledTest,
};
use crate::graph::{Knowledge, OrientMode};
use crate::stats::{mix_key, GaussianSuffStats, Truncation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResampleConfig {
    /// Number of resampled PC runs.
    pub m: usize,
    pub c_star: f64,
    pub nu: f64,
    /// Assumed maximum adjacency; enters `L`.
    pub max_adj: usize,
    /// Defaults to `max_adj`.
    #[serde(default)]
    pub max_cond_size: Option<usize>,
    #[serde(default)]
    pub truncation: Truncation,
    pub master_seed: u64,
    #[serde(default = "default_true")]
    pub half_factor: bool,
    #[serde(default)]
    pub orient_mode: OrientMode,
    #[serde(default)]
    pub noise: Noise,
}

fn default_true() -> bool {
    true
}

impl ResampleConfig {
    /// Defaults used throughout: `ν = 0.025`, `max_adj = 7`, plain draws,
    /// standard Fisher z.
    pub fn new(m: usize, c_star: f64, master_seed: u64) -> Self {
        ResampleConfig {
            m,
            c_star,
            nu: 0.025,
            max_adj: 7,
            max_cond_size: None,
            truncation: Truncation::None,
            master_seed,
            half_factor: true,
            orient_mode: OrientMode::Standard,
            noise: Noise::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("M must be at least 1".into()));
        }
        if !(self.c_star > 0.0 && self.c_star.is_finite()) {
            return Err(Error::Config(format!("c* = {} must be positive", self.c_star)));
        }
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(Error::Config(format!("nu = {} not in (0, 1/2)", self.nu)));
        }
        if let Truncation::Symmetric(c) = self.truncation {
            if !(c > 0.0) {
                return Err(Error::Config("truncation half-width must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn effective_max_cond_size(&self) -> usize {
        self.max_cond_size.unwrap_or(self.max_adj)
    }
}

/// Output of the resampled runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResampleBatch {
    pub runs: Vec<DiscoveryResult>,
    /// Per-run seed derived from the master seed and run index.
    pub run_seeds: Vec<u64>,
    pub threshold: f64,
    pub l: u64,
    pub tau: f64,
}

/// Run tiered PC-stable `cfg.m` times with resampled statistics.
pub fn resampled_pc_runs(
    stats: &GaussianSuffStats,
    cfg: &ResampleConfig,
    knowledge: &Knowledge,
) -> Result<ResampleBatch> {
    let table = FisherZTable::new(stats.clone(), cfg.half_factor);
    resampled_pc_runs_with_table(&table, cfg, knowledge)
}

/// As [`resampled_pc_runs`], reusing already computed statistics.
///
/// Runs are independent and execute on the current rayon pool; results are
/// collected by run index, so the batch does not depend on the pool size.
pub fn resampled_pc_runs_with_table(
    table: &FisherZTable,
    cfg: &ResampleConfig,
    knowledge: &Knowledge,
) -> Result<ResampleBatch> {
    cfg.validate()?;
    if table.half_factor() != cfg.half_factor {
        return Err(Error::Config("statistic table and config disagree on half_factor".into()));
    }
    let d = table.n_vars();
    let n = table.stats().n_samples();
    let l = compute_l(d, cfg.max_adj);
    let tau = compute_tau(cfg.c_star, n, cfg.m, l);
    let threshold = resample_threshold(cfg.c_star, n, cfg.m, cfg.nu, l)?;
    let opts = PcOptions {
        max_cond_size: Some(cfg.effective_max_cond_size()),
        orient_mode: cfg.orient_mode,
        record_trace: false,
    };
    let runs = (0..cfg.m)
        .into_par_iter()
        .map(|m| {
            let test = ResampledTest {
                table,
                threshold,
                master_seed: cfg.master_seed,
                run: m as u64,
                truncation: cfg.truncation,
                noise: cfg.noise,
            };
            pc_stable_tiered(&test, knowledge, &opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let run_seeds = (0..cfg.m as u64)
        .map(|m| mix_key(&[cfg.master_seed, m]))
        .collect();
    Ok(ResampleBatch {
        runs,
        run_seeds,
        threshold,
        l,
        tau,
    })
}
