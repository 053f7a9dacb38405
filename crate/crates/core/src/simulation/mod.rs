//! Random linear Gaussian SEMs and the coverage study harness.

mod scenario;
mod sem;

pub use scenario::{c_star_grid, run_scenario, BenchRecord, ScenarioConfig};
pub use sem::{
    draw_and_scale_weights, population_regression_effect, random_dag, sample_sem, true_effect,
    WeightedDag,
};
