//! Tiered PC-stable over a pluggable conditional-independence test, and the
//! engine that repeats it with resampled test statistics.

mod citest;
mod constants;
mod pc;
mod resample;

pub use citest::{
    CiTest, Decision, DSeparationOracle, FisherZTable, FisherZTest, Noise, ResampledTest,
    TestOutcome,
};
pub use constants::{compute_err_n, compute_l, compute_tau, log_err_n, resample_threshold};
pub use pc::{pc_stable_tiered, Diagnostics, DiscoveryResult, PcOptions, TestRecord};
pub use resample::{resampled_pc_runs, resampled_pc_runs_with_table, ResampleBatch, ResampleConfig};
