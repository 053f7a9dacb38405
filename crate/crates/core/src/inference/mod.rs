//! Screening, per-graph effect estimation and the aggregated interval.

mod aggregate;
mod baseline;
mod estimate;
mod heuristic;
mod interval;

pub use aggregate::{
    aggregate_ci, aggregate_runs, alpha1, screen, wald_interval, AggregationReport, EffectQuery,
    KeptGraph,
};
pub use baseline::{naive_ci, oracle_ci};
pub use estimate::{
    adjustment_set, estimates_for_graph, exposure_parent_sets, AdjustPolicy, GraphEstimates,
    OlsCache, ParentSets, SkippedSet,
};
pub use heuristic::{c_star_heuristic, choose_c_star, GridPoint, HeuristicTable};
pub use interval::{Interval, IntervalUnion};
