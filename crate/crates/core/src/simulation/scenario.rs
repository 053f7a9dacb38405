use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{draw_and_scale_weights, random_dag, sample_sem, true_effect};
use crate::discovery::{
    resampled_pc_runs_with_table, FisherZTable, PcOptions, ResampleBatch, ResampleConfig,
};
use crate::graph::{Knowledge, OrientMode, TierOrder, ValidityLevel};
use crate::inference::{
    aggregate_runs, choose_c_star, naive_ci, oracle_ci, screen, EffectQuery, GridPoint, Interval,
    IntervalUnion,
};
use crate::stats::{correlation_from_data, mix_key, Truncation};
use crate::{Error, Result};

/// One simulation study: data-generating settings plus the grid of
/// resampling settings evaluated on every replicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub d: usize,
    pub expected_neighbors: f64,
    pub n: usize,
    /// Resampling sizes.
    pub ms: Vec<usize>,
    /// `c*` values, each evaluated on its own.
    pub c_stars: Vec<f64>,
    /// Also report the interval at the `c*` chosen per replicate by the
    /// kept-percentage heuristic over `c_stars`.
    #[serde(default)]
    pub heuristic: bool,
    pub nu: f64,
    pub gamma: f64,
    pub max_adj: usize,
    pub tiers: Vec<u32>,
    pub replicates: usize,
    #[serde(default)]
    pub truncation: Truncation,
    pub exposure: usize,
    pub outcome: usize,
    pub master_seed: u64,
    /// Fisher z conventions to sweep; `true` is the standard statistic.
    pub half_factors: Vec<bool>,
    /// Levels for the single-fit baseline; empty skips it.
    #[serde(default)]
    pub naive_alphas: Vec<f64>,
    #[serde(default = "default_true")]
    pub oracle: bool,
    #[serde(default)]
    pub level: ValidityLevel,
    #[serde(default)]
    pub orient_mode: OrientMode,
}

fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    /// Dense ten-node study: three tiers, effect of the sixth variable on the
    /// tenth, `n = 500`, majority-rule colliders.
    pub fn dense(master_seed: u64) -> Self {
        ScenarioConfig {
            name: "dense".into(),
            d: 10,
            expected_neighbors: 7.0,
            n: 500,
            ms: vec![50],
            c_stars: c_star_grid(),
            heuristic: true,
            nu: 0.025,
            gamma: 0.05,
            max_adj: 7,
            tiers: vec![1, 1, 1, 2, 2, 2, 2, 2, 3, 3],
            replicates: 500,
            truncation: Truncation::None,
            exposure: 5,
            outcome: 9,
            master_seed,
            half_factors: vec![true, false],
            naive_alphas: vec![0.01, 0.05],
            oracle: true,
            level: ValidityLevel::Strict,
            orient_mode: OrientMode::Majority { max_cond_size: 7 },
        }
    }

    /// As [`ScenarioConfig::dense`] with four expected neighbours.
    pub fn sparse(master_seed: u64) -> Self {
        ScenarioConfig {
            name: "sparse".into(),
            expected_neighbors: 4.0,
            ..Self::dense(master_seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.replicates == 0 {
            return bad("replicates must be at least 1");
        }
        if self.tiers.len() != self.d {
            return bad("tier vector length differs from d");
        }
        if self.exposure >= self.d || self.outcome >= self.d || self.exposure == self.outcome {
            return bad("exposure and outcome must be distinct nodes");
        }
        if self.tiers[self.exposure] > self.tiers[self.outcome] {
            return bad("exposure tier is later than outcome tier");
        }
        if self.ms.contains(&0) {
            return bad("M must be at least 1");
        }
        if self.c_stars.windows(2).any(|w| w[0] >= w[1]) {
            return bad("c* grid must be strictly increasing");
        }
        if self.heuristic && self.c_stars.is_empty() {
            return bad("heuristic needs a c* grid");
        }
        if !(self.gamma > self.nu && self.nu > 0.0 && self.gamma < 1.0) {
            return bad("need 0 < nu < gamma < 1");
        }
        if self.n < self.d + 4 {
            return bad("n too small for d");
        }
        TierOrder::new(self.tiers.clone())?;
        Ok(())
    }

    pub fn knowledge(&self) -> Result<Knowledge> {
        Ok(Knowledge::from_tiers(TierOrder::new(self.tiers.clone())?))
    }

    /// Seed of replicate `rep`; shared by every method and grid point.
    pub fn replicate_seed(&self, rep: usize) -> u64 {
        mix_key(&[self.master_seed, rep as u64])
    }
}

/// `c*` values swept in the dense and sparse studies.
pub fn c_star_grid() -> Vec<f64> {
    vec![0.006, 0.007, 0.008, 0.009, 0.01, 0.02, 0.03, 0.04]
}

/// Summary of one method over all replicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub scenario: String,
    /// `resample`, `resample_heuristic`, `naive_<alpha>` or `oracle`.
    pub method: String,
    pub half_factor: Option<bool>,
    pub c_star: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub n: usize,
    /// Among replicates that produced an interval.
    pub coverage: f64,
    pub avg_length_union: f64,
    pub avg_length_hull: f64,
    /// Standard error of `avg_length_union`.
    pub length_se_union: f64,
    /// Mean percentage of kept graphs (resampling methods only).
    pub kept_pct: Option<f64>,
    pub no_interval_pct: f64,
    pub replicates: usize,
    /// Replicates that produced an interval.
    pub intervals: usize,
    pub seed: u64,
}

impl BenchRecord {
    /// Monte Carlo standard error of `coverage`.
    pub fn coverage_se(&self) -> f64 {
        if self.intervals == 0 {
            return f64::NAN;
        }
        (self.coverage * (1.0 - self.coverage) / self.intervals as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct MethodKey {
    method: String,
    half_factor: Option<bool>,
    c_star_bits: Option<u64>,
    m: Option<usize>,
}

/// What one method produced on one replicate.
#[derive(Clone, Debug, PartialEq)]
struct Cell {
    key: MethodKey,
    interval: Option<(bool, f64, f64)>,
    kept_fraction: Option<f64>,
}

fn cell_from_union(key: MethodKey, u: Option<&IntervalUnion>, truth: f64, kept: Option<f64>) -> Cell {
    Cell {
        key,
        interval: u.map(|u| {
            (
                u.contains(truth),
                u.total_length(),
                u.hull().map_or(0.0, |h| h.length()),
            )
        }),
        kept_fraction: kept,
    }
}

fn cell_from_interval(key: MethodKey, iv: Interval, truth: f64) -> Cell {
    Cell {
        key,
        interval: Some((iv.contains(truth), iv.length(), iv.length())),
        kept_fraction: None,
    }
}

/// Everything produced on one replicate, in a fixed order.
fn run_replicate(cfg: &ScenarioConfig, knowledge: &Knowledge, rep: usize) -> Result<Vec<Cell>> {
    let seed = cfg.replicate_seed(rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dag = random_dag(cfg.d, cfg.expected_neighbors, &mut rng)?;
    let wd = draw_and_scale_weights(&dag, &mut rng);
    let x = sample_sem(&wd, cfg.n, &mut rng)?;
    let truth = true_effect(&wd, cfg.exposure, cfg.outcome)?;
    let stats = correlation_from_data(&x)?;
    let query = EffectQuery {
        level: cfg.level,
        ..EffectQuery::new(cfg.exposure, cfg.outcome, cfg.gamma)
    };
    let mut cells = Vec::new();

    for &hf in &cfg.half_factors {
        let table = FisherZTable::new(stats.clone(), hf);
        for &m in &cfg.ms {
            let mut points = Vec::with_capacity(cfg.c_stars.len());
            let mut reports = Vec::with_capacity(cfg.c_stars.len());
            for &c_star in &cfg.c_stars {
                let rc = ResampleConfig {
                    nu: cfg.nu,
                    max_adj: cfg.max_adj,
                    truncation: cfg.truncation,
                    half_factor: hf,
                    orient_mode: cfg.orient_mode,
                    ..ResampleConfig::new(m, c_star, mix_key(&[seed, 1]))
                };
                let batch: ResampleBatch = resampled_pc_runs_with_table(&table, &rc, knowledge)?;
                let report = aggregate_runs(&x, &batch.runs, knowledge, &query, cfg.nu)?;
                debug_assert_eq!(report.kept_indices, screen(&batch.runs, cfg.level, knowledge));
                points.push(GridPoint {
                    c_star,
                    kept: report.kept_indices.len(),
                    m,
                    kept_pct: 100.0 * report.kept_fraction(),
                });
                cells.push(cell_from_union(
                    MethodKey {
                        method: "resample".into(),
                        half_factor: Some(hf),
                        c_star_bits: Some(c_star.to_bits()),
                        m: Some(m),
                    },
                    report.ci_union.as_ref(),
                    truth,
                    Some(report.kept_fraction()),
                ));
                reports.push(report);
            }
            if cfg.heuristic {
                let chosen = choose_c_star(&points);
                let report = chosen.map(|k| &reports[k]);
                cells.push(cell_from_union(
                    MethodKey {
                        method: "resample_heuristic".into(),
                        half_factor: Some(hf),
                        c_star_bits: None,
                        m: Some(m),
                    },
                    report.and_then(|r| r.ci_union.as_ref()),
                    truth,
                    Some(report.map_or(0.0, |r| r.kept_fraction())),
                ));
            }
        }
    }

    if !cfg.naive_alphas.is_empty() {
        let table = FisherZTable::new(stats.clone(), true);
        let opts = PcOptions {
            max_cond_size: Some(cfg.max_adj),
            orient_mode: cfg.orient_mode,
            record_trace: false,
        };
        for &alpha in &cfg.naive_alphas {
            let u = naive_ci(&x, &table, alpha, knowledge, &query, &opts)?;
            cells.push(cell_from_union(
                MethodKey {
                    method: format!("naive_{alpha}"),
                    half_factor: Some(true),
                    c_star_bits: None,
                    m: None,
                },
                u.as_ref(),
                truth,
                None,
            ));
        }
    }
    if cfg.oracle {
        let iv = oracle_ci(&x, &dag, cfg.gamma, cfg.exposure, cfg.outcome)?;
        cells.push(cell_from_interval(
            MethodKey {
                method: "oracle".into(),
                half_factor: None,
                c_star_bits: None,
                m: None,
            },
            iv,
            truth,
        ));
    }
    Ok(cells)
}

fn summarise(cfg: &ScenarioConfig, key: &MethodKey, cells: &[&Cell]) -> BenchRecord {
    let reps = cells.len();
    let with: Vec<(bool, f64, f64)> = cells.iter().filter_map(|c| c.interval).collect();
    let k = with.len();
    let mean = |f: &dyn Fn(&(bool, f64, f64)) -> f64| {
        if k == 0 {
            f64::NAN
        } else {
            with.iter().map(f).sum::<f64>() / k as f64
        }
    };
    let coverage = mean(&|c| if c.0 { 1.0 } else { 0.0 });
    let avg_union = mean(&|c| c.1);
    let avg_hull = mean(&|c| c.2);
    let length_se_union = if k > 1 {
        let var = with.iter().map(|c| (c.1 - avg_union).powi(2)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        f64::NAN
    };
    let kept: Vec<f64> = cells.iter().filter_map(|c| c.kept_fraction).collect();
    let kept_pct = (!kept.is_empty()).then(|| 100.0 * kept.iter().sum::<f64>() / kept.len() as f64);
    BenchRecord {
        scenario: cfg.name.clone(),
        method: key.method.clone(),
        half_factor: key.half_factor,
        c_star: key.c_star_bits.map(f64::from_bits),
        m: key.m,
        n: cfg.n,
        coverage,
        avg_length_union: avg_union,
        avg_length_hull: avg_hull,
        length_se_union,
        kept_pct,
        no_interval_pct: 100.0 * (reps - k) as f64 / reps as f64,
        replicates: reps,
        intervals: k,
        seed: cfg.master_seed,
    }
}

/// Runs every replicate of `cfg` and summarises each method. Replicates run
/// on the current rayon pool and are combined in index order, so the output
/// does not depend on the number of workers.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let knowledge = cfg.knowledge()?;
    let per_rep = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| run_replicate(cfg, &knowledge, rep))
        .collect::<Result<Vec<_>>>()?;
    let keys: Vec<MethodKey> = per_rep[0].iter().map(|c| c.key.clone()).collect();
    let records = keys
        .iter()
        .enumerate()
        .map(|(slot, key)| {
            let cells: Vec<&Cell> = per_rep.iter().map(|r| &r[slot]).collect();
            debug_assert!(cells.iter().all(|c| &c.key == key));
            summarise(cfg, key, &cells)
        })
        .collect();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ScenarioConfig {
        ScenarioConfig {
            name: "tiny".into(),
            d: 5,
            expected_neighbors: 2.0,
            n: 200,
            ms: vec![5],
            c_stars: vec![0.01, 0.04],
            replicates: 3,
            tiers: vec![1, 1, 2, 2, 3],
            exposure: 2,
            outcome: 4,
            half_factors: vec![true],
            ..ScenarioConfig::dense(11)
        }
    }

    #[test]
    fn record_layout() {
        let recs = run_scenario(&tiny()).unwrap();
        let methods: Vec<&str> = recs.iter().map(|r| r.method.as_str()).collect();
        assert_eq!(
            methods,
            ["resample", "resample", "resample_heuristic", "naive_0.01", "naive_0.05", "oracle"]
        );
        for r in &recs {
            assert_eq!(r.replicates, 3);
            assert!(r.no_interval_pct >= 0.0 && r.no_interval_pct <= 100.0);
            if r.intervals > 0 {
                assert!((0.0..=1.0).contains(&r.coverage));
            }
        }
    }

    #[test]
    fn reproducible() {
        assert_eq!(run_scenario(&tiny()).unwrap(), run_scenario(&tiny()).unwrap());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = tiny();
        c.outcome = 0;
        assert!(run_scenario(&c).is_err());
        let mut c = tiny();
        c.tiers.pop();
        assert!(c.validate().is_err());
    }
}
