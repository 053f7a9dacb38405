//! Counter-based randomness for resampled test statistics.
//!
//! Every draw is a pure function of its key, so a run can be replayed and
//! runs can be scheduled on any number of workers.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Range restriction for resampled statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    #[default]
    None,
    /// Draws restricted to `z_hat ± c` standard deviations.
    Symmetric(f64),
}

/// Identity of one resampled statistic: the hypothesis `(pair, subset)` in
/// run `run` of the procedure seeded by `master_seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DrawKey {
    pub master_seed: u64,
    pub run: u64,
    pub pair: u64,
    pub subset: u64,
}

impl DrawKey {
    pub fn seed(&self) -> u64 {
        mix_key(&[self.master_seed, self.run, self.pair, self.subset])
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a tuple of integers.
pub fn mix_key(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x5EED_u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Small-state generator for one key; seeding is cheap because a fresh one
/// is built for every resampled statistic.
pub fn keyed_rng(key: DrawKey) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(key.seed())
}

/// One draw from `N(z_hat, 1)`, optionally restricted to `z_hat ± c` by rejection.
pub fn resample_statistic<R: Rng + ?Sized>(z_hat: f64, rng: &mut R, truncation: Truncation) -> f64 {
    match truncation {
        Truncation::None => z_hat + rng.sample::<f64, _>(StandardNormal),
        Truncation::Symmetric(c) => {
            assert!(c > 0.0, "truncation half-width must be positive");
            loop {
                let e: f64 = rng.sample(StandardNormal);
                if e.abs() <= c {
                    return z_hat + e;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(run: u64) -> DrawKey {
        DrawKey {
            master_seed: 7,
            run,
            pair: 3,
            subset: 0b1010,
        }
    }

    #[test]
    fn keyed_draws_are_reproducible() {
        let a = resample_statistic(1.5, &mut keyed_rng(key(4)), Truncation::None);
        let b = resample_statistic(1.5, &mut keyed_rng(key(4)), Truncation::None);
        assert_eq!(a.to_bits(), b.to_bits());
        let c = resample_statistic(1.5, &mut keyed_rng(key(5)), Truncation::None);
        assert_ne!(a, c);
    }

    #[test]
    fn moments_of_plain_draws() {
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|r| resample_statistic(2.0, &mut keyed_rng(key(r)), Truncation::None))
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 2.0).abs() < 0.02, "mean {mean}");
        assert!((var.sqrt() - 1.0).abs() < 0.01, "sd {}", var.sqrt());
    }

    #[test]
    fn truncated_draws_stay_in_range() {
        for r in 0..20_000 {
            let v = resample_statistic(-0.7, &mut keyed_rng(key(r)), Truncation::Symmetric(1.5));
            assert!((-2.2..=0.8).contains(&v));
        }
    }
}
