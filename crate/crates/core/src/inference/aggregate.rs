use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{estimates_for_graph, AdjustPolicy, GraphEstimates, Interval, IntervalUnion, OlsCache};
use crate::discovery::DiscoveryResult;
use crate::graph::{is_valid_cpdag, Knowledge, MixedGraph, ValidityLevel, DEFAULT_ENUMERATION_CAP};
use crate::stats::{upper_quantile, DataMatrix, EffectEstimate};
use crate::{Error, Result};

/// Indices of the runs whose graph passes screening.
pub fn screen(runs: &[DiscoveryResult], level: ValidityLevel, knowledge: &Knowledge) -> Vec<usize> {
    let mut verdicts: FxHashMap<&MixedGraph, bool> = FxHashMap::default();
    runs.iter()
        .enumerate()
        .filter(|(_, r)| {
            *verdicts
                .entry(&r.graph)
                .or_insert_with(|| is_valid_cpdag(&r.graph, level, knowledge))
        })
        .map(|(m, _)| m)
        .collect()
}

/// Level of each constituent interval, `gamma - nu`.
pub fn alpha1(gamma: f64, nu: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0 && nu > 0.0 && nu < gamma) {
        return Err(Error::Config(format!(
            "need 0 < nu < gamma < 1, got gamma = {gamma}, nu = {nu}"
        )));
    }
    Ok(gamma - nu)
}

/// Wald interval `beta ± z_{level/2} se`.
pub fn wald_interval(e: &EffectEstimate, level: f64) -> Result<Interval> {
    let z = upper_quantile(level / 2.0)?;
    Interval::symmetric(e.beta, z * e.se)
}

/// Union of the per-estimate intervals at level `gamma - nu`.
pub fn aggregate_ci<'a>(
    estimates: impl IntoIterator<Item = &'a EffectEstimate>,
    gamma: f64,
    nu: f64,
) -> Result<IntervalUnion> {
    let a1 = alpha1(gamma, nu)?;
    union_of_wald(estimates, a1)
}

pub(crate) fn union_of_wald<'a>(
    estimates: impl IntoIterator<Item = &'a EffectEstimate>,
    level: f64,
) -> Result<IntervalUnion> {
    let intervals = estimates
        .into_iter()
        .map(|e| wald_interval(e, level))
        .collect::<Result<Vec<_>>>()?;
    if intervals.is_empty() {
        return Err(Error::NoValidGraphs);
    }
    Ok(IntervalUnion::from_intervals(intervals))
}

/// What to estimate and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectQuery {
    pub exposure: usize,
    pub outcome: usize,
    pub gamma: f64,
    #[serde(default)]
    pub policy: AdjustPolicy,
    #[serde(default)]
    pub level: ValidityLevel,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_ENUMERATION_CAP
}

impl EffectQuery {
    pub fn new(exposure: usize, outcome: usize, gamma: f64) -> Self {
        EffectQuery {
            exposure,
            outcome,
            gamma,
            policy: AdjustPolicy::ParentsOnly,
            level: ValidityLevel::Strict,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeptGraph {
    /// Run index within the batch.
    pub index: usize,
    #[serde(flatten)]
    pub estimates: GraphEstimates,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregationReport {
    pub m: usize,
    pub kept_indices: Vec<usize>,
    pub graphs: Vec<KeptGraph>,
    /// `None` when no graph was kept or no estimate could be formed.
    pub ci_union: Option<IntervalUnion>,
    pub gamma: f64,
    pub nu: f64,
    pub alpha1: f64,
    /// Some enumeration hit the cap.
    pub overflow: bool,
}

impl AggregationReport {
    pub fn kept_fraction(&self) -> f64 {
        self.kept_indices.len() as f64 / self.m as f64
    }

    pub fn n_estimates(&self) -> usize {
        self.graphs.iter().map(|g| g.estimates.estimates.len()).sum()
    }
}

/// Screen the runs, estimate the effect in every kept graph and form the
/// union interval. Identical graphs are estimated once.
pub fn aggregate_runs(
    x: &DataMatrix,
    runs: &[DiscoveryResult],
    knowledge: &Knowledge,
    query: &EffectQuery,
    nu: f64,
) -> Result<AggregationReport> {
    let a1 = alpha1(query.gamma, nu)?;
    let kept = screen(runs, query.level, knowledge);
    let mut cache = OlsCache::new();
    let mut per_graph: FxHashMap<&MixedGraph, GraphEstimates> = FxHashMap::default();
    let mut graphs = Vec::with_capacity(kept.len());
    for &m in &kept {
        let g = &runs[m].graph;
        let est = match per_graph.get(g) {
            Some(e) => e.clone(),
            None => {
                let e = estimates_for_graph(
                    x,
                    g,
                    query.exposure,
                    query.outcome,
                    query.policy,
                    knowledge,
                    query.cap,
                    &mut cache,
                )?;
                per_graph.insert(g, e.clone());
                e
            }
        };
        graphs.push(KeptGraph {
            index: m,
            estimates: est,
        });
    }
    let ci_union = match union_of_wald(graphs.iter().flat_map(|g| &g.estimates.estimates), a1) {
        Ok(u) => Some(u),
        Err(Error::NoValidGraphs) => None,
        Err(e) => return Err(e),
    };
    Ok(AggregationReport {
        m: runs.len(),
        overflow: graphs.iter().any(|g| g.estimates.overflow),
        kept_indices: kept,
        graphs,
        ci_union,
        gamma: query.gamma,
        nu,
        alpha1: a1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NodeSet;

    fn est(beta: f64, se: f64) -> EffectEstimate {
        EffectEstimate {
            beta,
            se,
            adjust_set: NodeSet::EMPTY,
        }
    }

    #[test]
    fn single_estimate_interval() {
        let u = aggregate_ci(&[est(1.0, 0.1)], 0.05, 0.025).unwrap();
        let z = 2.241402727604947;
        let c = u.components()[0];
        assert!((c.lo - (1.0 - z * 0.1)).abs() < 1e-12);
        assert!((c.hi - (1.0 + z * 0.1)).abs() < 1e-12);
    }

    #[test]
    fn empty_is_no_valid_graphs() {
        assert_eq!(aggregate_ci(&[], 0.05, 0.025), Err(Error::NoValidGraphs));
    }

    #[test]
    fn nu_must_be_below_gamma() {
        assert!(aggregate_ci(&[est(0.0, 1.0)], 0.05, 0.05).is_err());
    }

    #[test]
    fn larger_nu_widens() {
        let e = [est(0.3, 0.2)];
        let narrow = aggregate_ci(&e, 0.05, 0.01).unwrap().total_length();
        let wide = aggregate_ci(&e, 0.05, 0.04).unwrap().total_length();
        assert!(wide > narrow);
    }
}
