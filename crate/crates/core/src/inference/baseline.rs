use super::aggregate::{union_of_wald, wald_interval};
use super::{estimates_for_graph, EffectQuery, Interval, IntervalUnion, OlsCache};
use crate::discovery::{pc_stable_tiered, FisherZTable, FisherZTest, PcOptions};
use crate::graph::{is_valid_cpdag, Dag, Knowledge};
use crate::stats::{ols_effect, DataMatrix};
use crate::{Error, Result};

/// Interval that treats a single PC fit at level `alpha` as the true graph:
/// the union of per-DAG Wald intervals at level `query.gamma`.
///
/// `None` when the PC output fails screening or yields no estimate.
pub fn naive_ci(
    x: &DataMatrix,
    table: &FisherZTable,
    alpha: f64,
    knowledge: &Knowledge,
    query: &EffectQuery,
    opts: &PcOptions,
) -> Result<Option<IntervalUnion>> {
    let test = FisherZTest::new(table, alpha)?;
    let fit = pc_stable_tiered(&test, knowledge, opts)?;
    if !is_valid_cpdag(&fit.graph, query.level, knowledge) {
        return Ok(None);
    }
    let est = estimates_for_graph(
        x,
        &fit.graph,
        query.exposure,
        query.outcome,
        query.policy,
        knowledge,
        query.cap,
        &mut OlsCache::new(),
    )?;
    match union_of_wald(&est.estimates, query.gamma) {
        Ok(u) => Ok(Some(u)),
        Err(Error::NoValidGraphs) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Wald interval from the regression that adjusts for the exposure's parents
/// in the true DAG.
pub fn oracle_ci(
    x: &DataMatrix,
    dag: &Dag,
    gamma: f64,
    exposure: usize,
    outcome: usize,
) -> Result<Interval> {
    if exposure >= dag.n_nodes() {
        return Err(Error::NodeOutOfRange {
            index: exposure,
            d: dag.n_nodes(),
        });
    }
    let pa = dag.parents(exposure);
    if pa.contains(outcome) {
        return Ok(Interval { lo: 0.0, hi: 0.0 });
    }
    let est = ols_effect(x, exposure, outcome, pa)?;
    wald_interval(&est, gamma)
}
