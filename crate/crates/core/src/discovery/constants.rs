//! Threshold constants of the resampled test.

use crate::stats::upper_quantile;
use crate::Result;

/// Upper bound on the number of tests in one PC run:
/// `d(d-1)/2 * (max_adj + 1)`.
pub fn compute_l(d: usize, max_adj: usize) -> u64 {
    (d * (d - 1) / 2) as u64 * (max_adj as u64 + 1)
}

/// Shrinkage factor `τ(M) = c* (ln n / M)^{1/L}`, evaluated in log space.
pub fn compute_tau(c_star: f64, n: usize, m: usize, l: u64) -> f64 {
    let log_base = (n as f64).ln().ln() - (m as f64).ln();
    c_star * (log_base / l as f64).exp()
}

/// `τ(M) · z_{ν/2L}`, the rejection threshold for resampled statistics.
pub fn resample_threshold(c_star: f64, n: usize, m: usize, nu: f64, l: u64) -> Result<f64> {
    Ok(compute_tau(c_star, n, m, l) * upper_quantile(nu / (2.0 * l as f64))?)
}

/// `ln err_n(M, ν)`. `c(ν)` underflows for realistic `L`, so everything
/// stays in log space.
pub fn log_err_n(n: usize, m: usize, nu: f64, l: u64) -> Result<f64> {
    let lf = l as f64;
    let z = upper_quantile(nu / (2.0 * lf))?;
    let log_c = -0.5 * lf * (2.0 * std::f64::consts::PI).ln() - 0.5 * lf * z * z;
    let log_inner = (2.0 * (n as f64).ln()).ln() - log_c - (m as f64).ln();
    Ok(-std::f64::consts::LN_2 + log_inner / lf)
}

/// `err_n(M, ν) = ½ (2 ln n / (c(ν) M))^{1/L}` with
/// `c(ν) = (2π)^{-L/2} exp(-(L/2) z²_{ν/2L})`. Diagnostic only.
pub fn compute_err_n(n: usize, m: usize, nu: f64, l: u64) -> Result<f64> {
    Ok(log_err_n(n, m, nu, l)?.exp())
}
