use std::path::Path;

use pcsel::discovery::{resampled_pc_runs, Diagnostics};
use pcsel::graph::{check_validity, to_dot, to_edge_list, Invalidity};
use pcsel::stats::correlation_from_data;
use serde::Serialize;

use crate::config::RunConfig;
use crate::data::read_csv;
use crate::error::{io_err, CliError, CliResult};
use crate::knowledge::KnowledgeSpec;

#[derive(Serialize)]
struct RunSummary<'a> {
    index: usize,
    seed: u64,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    invalid: Option<Invalidity>,
    graph: String,
    diagnostics: &'a Diagnostics,
}

#[derive(Serialize)]
struct DiscoverReport<'a> {
    config: &'a RunConfig,
    variables: &'a [String],
    threshold: f64,
    tau: f64,
    #[serde(rename = "L")]
    l: u64,
    kept_indices: Vec<usize>,
    runs: Vec<RunSummary<'a>>,
}

pub fn run(cfg: &RunConfig, out: Option<&Path>, dot: bool) -> CliResult<()> {
    if cfg.c_star.len() != 1 {
        return Err(CliError::Config("discover takes a single c* value".into()));
    }
    let x = read_csv(&cfg.input)?;
    let names = x.names();
    let knowledge = KnowledgeSpec {
        tiers: cfg.tiers.as_deref(),
        forbid: &cfg.forbid,
        require: &cfg.require,
        scope: cfg.scope.as_deref(),
    }
    .build(names)?;
    let stats = correlation_from_data(&x)?;
    let batch = resampled_pc_runs(&stats, &cfg.resample_template(), &knowledge)?;
    let level = cfg.level.into();

    let runs: Vec<RunSummary> = batch
        .runs
        .iter()
        .zip(&batch.run_seeds)
        .enumerate()
        .map(|(index, (r, &seed))| {
            let invalid = check_validity(&r.graph, level, &knowledge).err();
            RunSummary {
                index,
                seed,
                valid: invalid.is_none(),
                invalid,
                graph: to_edge_list(&r.graph),
                diagnostics: &r.diagnostics,
            }
        })
        .collect();
    let report = DiscoverReport {
        config: cfg,
        variables: names,
        threshold: batch.threshold,
        tau: batch.tau,
        l: batch.l,
        kept_indices: runs.iter().filter(|r| r.valid).map(|r| r.index).collect(),
        runs,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";

    let Some(dir) = out else {
        print!("{json}");
        return Ok(());
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let write = |name: String, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| io_err(&p, e))
    };
    for (k, r) in batch.runs.iter().enumerate() {
        write(format!("run_{k:04}.txt"), &report.runs[k].graph)?;
        if dot {
            write(format!("run_{k:04}.dot"), &to_dot(&r.graph, Some(names)))?;
        }
    }
    write("discover.json".into(), &json)
}
