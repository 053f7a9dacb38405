use serde::{Deserialize, Serialize};

use super::screen;
use crate::discovery::{resampled_pc_runs_with_table, FisherZTable, ResampleBatch, ResampleConfig};
use crate::graph::{Knowledge, ValidityLevel};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c_star: f64,
    pub kept: usize,
    pub m: usize,
    pub kept_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicTable {
    pub points: Vec<GridPoint>,
    /// Index into `points` of the chosen value, `None` if no grid point kept
    /// any graph.
    pub chosen: Option<usize>,
}

impl HeuristicTable {
    pub fn chosen_c_star(&self) -> Option<f64> {
        self.chosen.map(|k| self.points[k].c_star)
    }
}

/// Picks the grid value with the smallest nonzero kept fraction, ties going
/// to the smaller value.
pub fn choose_c_star(points: &[GridPoint]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, p) in points.iter().enumerate() {
        if p.kept == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let (pb, pk) = (&points[b], p);
                let lhs = pk.kept as u128 * pb.m as u128;
                let rhs = pb.kept as u128 * pk.m as u128;
                lhs < rhs || (lhs == rhs && pk.c_star < pb.c_star)
            }
        };
        if better {
            best = Some(k);
        }
    }
    best
}

/// Runs the resampled search and screening at every `c*` in `grid`. The
/// batches are returned alongside the table so the chosen one can be reused.
pub fn c_star_heuristic(
    table: &FisherZTable,
    grid: &[f64],
    template: &ResampleConfig,
    knowledge: &Knowledge,
    level: ValidityLevel,
) -> Result<(HeuristicTable, Vec<ResampleBatch>)> {
    if grid.is_empty() {
        return Err(Error::Config("empty c* grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("c* grid must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut batches = Vec::with_capacity(grid.len());
    for &c_star in grid {
        let cfg = ResampleConfig {
            c_star,
            ..template.clone()
        };
        let batch = resampled_pc_runs_with_table(table, &cfg, knowledge)?;
        let kept = screen(&batch.runs, level, knowledge).len();
        points.push(GridPoint {
            c_star,
            kept,
            m: cfg.m,
            kept_pct: 100.0 * kept as f64 / cfg.m as f64,
        });
        batches.push(batch);
    }
    let chosen = choose_c_star(&points);
    Ok((HeuristicTable { points, chosen }, batches))
}
