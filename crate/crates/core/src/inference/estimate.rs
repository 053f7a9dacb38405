use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::graph::{enumerate_dags, Knowledge, MixedGraph};
use crate::stats::{ols_effect, DataMatrix, EffectEstimate};
use crate::{Error, NodeSet, Result};

/// Which adjustment set is built from an exposure parent set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustPolicy {
    /// The exposure's parents.
    #[default]
    ParentsOnly,
    /// The exposure's parents plus every node in an earlier tier.
    ParentsPlusTierBlock,
}

/// Distinct exposure parent sets over the DAGs represented by a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ParentSets {
    pub sets: Vec<NodeSet>,
    pub n_dags: usize,
    pub overflow: bool,
}

/// Parent sets of `exposure` across all consistent extensions of `c`, in
/// order of first appearance.
///
/// When `knowledge` carries a validity scope containing the exposure, only
/// the subgraph over the scope is enumerated and directed parents from
/// outside the scope are added to every set.
pub fn exposure_parent_sets(
    c: &MixedGraph,
    exposure: usize,
    knowledge: &Knowledge,
    cap: usize,
) -> Result<ParentSets> {
    c.check_node(exposure)?;
    let (g, map, outside) = match knowledge.background.validity_scope {
        None => (c.clone(), (0..c.n_nodes()).collect::<Vec<_>>(), NodeSet::EMPTY),
        Some(scope) => {
            if !scope.contains(exposure) {
                return Err(Error::Precondition(format!(
                    "exposure {exposure} lies outside the validity scope"
                )));
            }
            let (h, map) = c.induced(scope);
            (h, map, c.parents(exposure).difference(scope))
        }
    };
    let local = map.iter().position(|&v| v == exposure).expect("exposure in map");
    let en = enumerate_dags(&g, cap)?;
    let mut sets: Vec<NodeSet> = Vec::new();
    for dag in &en.dags {
        let pa: NodeSet = dag.parents(local).iter().map(|v| map[v]).collect();
        let pa = pa.union(outside);
        if !sets.contains(&pa) {
            sets.push(pa);
        }
    }
    Ok(ParentSets {
        sets,
        n_dags: en.dags.len(),
        overflow: en.overflow,
    })
}

/// Adjustment set for one exposure parent set, or `None` when the outcome is
/// itself a parent, in which case the effect is zero.
pub fn adjustment_set(
    parents: NodeSet,
    exposure: usize,
    outcome: usize,
    policy: AdjustPolicy,
    knowledge: &Knowledge,
) -> Option<NodeSet> {
    if parents.contains(outcome) {
        return None;
    }
    let set = match policy {
        AdjustPolicy::ParentsOnly => parents,
        AdjustPolicy::ParentsPlusTierBlock => parents.union(knowledge.tiers.earlier_than(exposure)),
    };
    Some(set.without(exposure).without(outcome))
}

/// Adjustment set whose regression failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedSet {
    pub adjust_set: NodeSet,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphEstimates {
    pub estimates: Vec<EffectEstimate>,
    /// Number of DAGs enumerated.
    pub n_dags: usize,
    pub overflow: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedSet>,
}

/// Regression results keyed by adjustment set, so that the same set is fitted
/// once across all graphs of an analysis.
#[derive(Default)]
pub struct OlsCache {
    fits: FxHashMap<NodeSet, Result<EffectEstimate>>,
}

impl OlsCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fit(
        &mut self,
        x: &DataMatrix,
        exposure: usize,
        outcome: usize,
        adjust: NodeSet,
    ) -> Result<EffectEstimate> {
        self.fits
            .entry(adjust)
            .or_insert_with(|| ols_effect(x, exposure, outcome, adjust))
            .clone()
    }
}

/// Back-door estimates for every distinct adjustment set implied by `c`.
/// A DAG in which the outcome is a parent of the exposure contributes the
/// point estimate zero with zero standard error.
#[allow(clippy::too_many_arguments)]
pub fn estimates_for_graph(
    x: &DataMatrix,
    c: &MixedGraph,
    exposure: usize,
    outcome: usize,
    policy: AdjustPolicy,
    knowledge: &Knowledge,
    cap: usize,
    cache: &mut OlsCache,
) -> Result<GraphEstimates> {
    if exposure == outcome {
        return Err(Error::Precondition("exposure and outcome coincide".into()));
    }
    c.check_node(outcome)?;
    let ps = exposure_parent_sets(c, exposure, knowledge, cap)?;
    let mut estimates: Vec<EffectEstimate> = Vec::new();
    let mut skipped = Vec::new();
    for pa in ps.sets {
        let est = match adjustment_set(pa, exposure, outcome, policy, knowledge) {
            None => EffectEstimate {
                beta: 0.0,
                se: 0.0,
                adjust_set: pa,
            },
            Some(adjust) => match cache.fit(x, exposure, outcome, adjust) {
                Ok(e) => e,
                Err(e) => {
                    skipped.push(SkippedSet {
                        adjust_set: adjust,
                        reason: e.to_string(),
                    });
                    continue;
                }
            },
        };
        if !estimates.contains(&est) {
            estimates.push(est);
        }
    }
    Ok(GraphEstimates {
        estimates,
        n_dags: ps.n_dags,
        overflow: ps.overflow,
        skipped,
    })
}
