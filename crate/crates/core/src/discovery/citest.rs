use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::graph::{d_separated, Dag};
use crate::stats::{
    fisher_z, keyed_rng, normal_quantile, partial_correlation_unclamped, resample_statistic,
    DrawKey, GaussianSuffStats, Truncation, RHO_CLAMP_EPS,
};
use crate::{Error, NodeSet, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Independent,
    Dependent,
    /// Too few degrees of freedom or a singular conditioning set.
    CannotTest,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestOutcome {
    pub decision: Decision,
    /// The statistic compared against the threshold, when there is one.
    pub statistic: Option<f64>,
}

/// A conditional-independence decision procedure. Implementations must be
/// symmetric in `(i, j)` and deterministic.
pub trait CiTest: Sync {
    fn n_vars(&self) -> usize;
    fn test(&self, i: usize, j: usize, s: NodeSet) -> TestOutcome;
}

/// Population test: independence iff d-separation in a known DAG.
pub struct DSeparationOracle<'a> {
    dag: &'a Dag,
}

impl<'a> DSeparationOracle<'a> {
    pub fn new(dag: &'a Dag) -> Self {
        DSeparationOracle { dag }
    }
}

impl CiTest for DSeparationOracle<'_> {
    fn n_vars(&self) -> usize {
        self.dag.n_nodes()
    }

    fn test(&self, i: usize, j: usize, s: NodeSet) -> TestOutcome {
        let sep = d_separated(self.dag, i, j, s).expect("PC only asks well-formed queries");
        TestOutcome {
            decision: if sep { Decision::Independent } else { Decision::Dependent },
            statistic: None,
        }
    }
}

/// Fisher-z statistics `Z(ρ̂_{ij|S}, n)` computed on demand and memoised.
/// Shared by every test that reads the same data.
pub struct FisherZTable {
    stats: GaussianSuffStats,
    half_factor: bool,
    cache: RwLock<FxHashMap<(u32, u64), Option<f64>>>,
    clamps: AtomicUsize,
}

impl FisherZTable {
    pub fn new(stats: GaussianSuffStats, half_factor: bool) -> Self {
        FisherZTable {
            stats,
            half_factor,
            cache: RwLock::new(FxHashMap::default()),
            clamps: AtomicUsize::new(0),
        }
    }

    pub fn stats(&self) -> &GaussianSuffStats {
        &self.stats
    }

    pub fn half_factor(&self) -> bool {
        self.half_factor
    }

    pub fn n_vars(&self) -> usize {
        self.stats.n_vars()
    }

    /// Index of the unordered pair `{i, j}`.
    pub fn pair_index(&self, i: usize, j: usize) -> u32 {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        (lo * self.stats.n_vars() + hi) as u32
    }

    /// Number of distinct statistics whose partial correlation had to be clamped.
    pub fn clamp_count(&self) -> usize {
        self.clamps.load(Ordering::Relaxed)
    }

    fn compute(&self, i: usize, j: usize, s: NodeSet) -> Option<f64> {
        let rho = match partial_correlation_unclamped(&self.stats, i, j, s) {
            Ok(r) => r,
            Err(Error::Singular { .. }) => return None,
            Err(e) => panic!("invalid partial correlation query: {e}"),
        };
        let lim = 1.0 - RHO_CLAMP_EPS;
        if rho.abs() > lim {
            self.clamps.fetch_add(1, Ordering::Relaxed);
        }
        fisher_z(rho.clamp(-lim, lim), self.stats.n_samples(), s.len(), self.half_factor).ok()
    }

    /// `Z(ρ̂_{ij|S}, n)`, or `None` when the hypothesis cannot be tested.
    pub fn z(&self, i: usize, j: usize, s: NodeSet) -> Option<f64> {
        let key = (self.pair_index(i, j), s.bits());
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return *v;
        }
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let v = self.compute(lo, hi, s);
        self.cache.write().unwrap().insert(key, v);
        v
    }
}

/// Fisher-z test at level `alpha`: dependent iff `|Z| > Φ⁻¹(1 - α/2)`.
pub struct FisherZTest<'a> {
    table: &'a FisherZTable,
    critical: f64,
}

impl<'a> FisherZTest<'a> {
    pub fn new(table: &'a FisherZTable, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Config(format!("significance level {alpha} not in (0, 1)")));
        }
        Ok(FisherZTest {
            table,
            critical: normal_quantile(1.0 - alpha / 2.0)?,
        })
    }

    pub fn critical_value(&self) -> f64 {
        self.critical
    }
}

impl CiTest for FisherZTest<'_> {
    fn n_vars(&self) -> usize {
        self.table.n_vars()
    }

    fn test(&self, i: usize, j: usize, s: NodeSet) -> TestOutcome {
        threshold_decision(self.table.z(i, j, s), self.critical)
    }
}

fn threshold_decision(stat: Option<f64>, threshold: f64) -> TestOutcome {
    match stat {
        None => TestOutcome {
            decision: Decision::CannotTest,
            statistic: None,
        },
        Some(z) => TestOutcome {
            decision: if z.abs() > threshold {
                Decision::Dependent
            } else {
                Decision::Independent
            },
            statistic: Some(z),
        },
    }
}

/// Whether resampled statistics get Gaussian noise. `Off` reproduces the
/// plain fixed-threshold test and exists for testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    #[default]
    Gaussian,
    Off,
}

/// The test used inside one resampled run: each hypothesis `(i, j, S)` gets
/// a single draw `Z^[m] ~ N(Z(ρ̂_{ij|S}, n), 1)` keyed by
/// `(master_seed, run, pair, S)`; dependence iff `|Z^[m]| > threshold`.
pub struct ResampledTest<'a> {
    pub table: &'a FisherZTable,
    pub threshold: f64,
    pub master_seed: u64,
    pub run: u64,
    pub truncation: Truncation,
    pub noise: Noise,
}

impl ResampledTest<'_> {
    /// The resampled statistic for `(i, j, S)` in this run.
    pub fn draw(&self, i: usize, j: usize, s: NodeSet) -> Option<f64> {
        let z = self.table.z(i, j, s)?;
        if self.noise == Noise::Off {
            return Some(z);
        }
        let key = DrawKey {
            master_seed: self.master_seed,
            run: self.run,
            pair: self.table.pair_index(i, j) as u64,
            subset: s.bits(),
        };
        Some(resample_statistic(z, &mut keyed_rng(key), self.truncation))
    }
}

impl CiTest for ResampledTest<'_> {
    fn n_vars(&self) -> usize {
        self.table.n_vars()
    }

    fn test(&self, i: usize, j: usize, s: NodeSet) -> TestOutcome {
        threshold_decision(self.draw(i, j, s), self.threshold)
    }
}
