//! Gaussian sufficient statistics, partial correlations and the Fisher-z
//! statistic, keyed resampling draws, OLS effect estimation and normal
//! distribution utilities.

mod data;
mod fisher;
mod normal;
mod ols;
mod partial;
mod resample;

pub use data::{correlation_from_data, DataMatrix, GaussianSuffStats};
pub use fisher::{fisher_z, RHO_CLAMP_EPS};
pub use normal::{normal_cdf, normal_quantile, upper_quantile};
pub use ols::{ols_effect, EffectEstimate};
pub use partial::{partial_correlation, partial_correlation_unclamped, MAX_CONDITION};
pub use resample::{keyed_rng, mix_key, resample_statistic, DrawKey, Truncation};
