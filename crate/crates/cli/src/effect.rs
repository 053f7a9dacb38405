use std::path::Path;

use pcsel::discovery::{resampled_pc_runs_with_table, FisherZTable, ResampleBatch};
use pcsel::inference::{
    aggregate_runs, alpha1, c_star_heuristic, AdjustPolicy, AggregationReport, EffectQuery,
    HeuristicTable,
};
use pcsel::stats::correlation_from_data;
use serde::Serialize;

use crate::config::RunConfig;
use crate::data::read_csv;
use crate::error::{CliError, CliResult};
use crate::knowledge::{resolve, KnowledgeSpec};

#[derive(Serialize)]
struct PolicyResult {
    policy: AdjustPolicy,
    kept: usize,
    report: AggregationReport,
}

#[derive(Serialize)]
struct EffectReport<'a> {
    status: &'static str,
    config: &'a RunConfig,
    variables: &'a [String],
    alpha1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    heuristic: Option<HeuristicTable>,
    /// `c*` the reported interval uses.
    c_star: Option<f64>,
    threshold: Option<f64>,
    kept: usize,
    #[serde(rename = "M")]
    m: usize,
    kept_pct: f64,
    results: Vec<PolicyResult>,
}

pub fn run(cfg: &RunConfig, out: Option<&Path>) -> CliResult<()> {
    let x = read_csv(&cfg.input)?;
    let names = x.names();
    let knowledge = KnowledgeSpec {
        tiers: cfg.tiers.as_deref(),
        forbid: &cfg.forbid,
        require: &cfg.require,
        scope: cfg.scope.as_deref(),
    }
    .build(names)?;
    let need = |v: &Option<String>, flag: &str| {
        v.as_deref()
            .ok_or_else(|| CliError::Config(format!("--{flag} is required")))
            .and_then(|n| resolve(names, n))
    };
    let exposure = need(&cfg.exposure, "exposure")?;
    let outcome = need(&cfg.outcome, "outcome")?;
    if exposure == outcome {
        return Err(CliError::Config("exposure and outcome must differ".into()));
    }
    if knowledge.tiers.tier(exposure) > knowledge.tiers.tier(outcome) {
        return Err(CliError::Config("exposure is in a later tier than the outcome".into()));
    }
    let a1 = alpha1(cfg.gamma, cfg.nu)?;

    let table = FisherZTable::new(correlation_from_data(&x)?, cfg.half_factor);
    let template = cfg.resample_template();
    let level = cfg.level.into();
    let (heuristic, batch): (Option<HeuristicTable>, Option<ResampleBatch>) = if cfg.c_star.len() > 1 {
        let (t, mut batches) = c_star_heuristic(&table, &cfg.c_star, &template, &knowledge, level)?;
        let chosen = t.chosen.map(|k| batches.swap_remove(k));
        (Some(t), chosen)
    } else {
        (None, Some(resampled_pc_runs_with_table(&table, &template, &knowledge)?))
    };
    let c_star = heuristic
        .as_ref()
        .map_or(Some(cfg.c_star[0]), HeuristicTable::chosen_c_star);

    let mut results = Vec::new();
    if let Some(b) = &batch {
        for policy in cfg.adjust.policies() {
            let query = EffectQuery {
                policy,
                level,
                ..EffectQuery::new(exposure, outcome, cfg.gamma)
            };
            let report = aggregate_runs(&x, &b.runs, &knowledge, &query, cfg.nu)?;
            results.push(PolicyResult {
                policy,
                kept: report.kept_indices.len(),
                report,
            });
        }
    }
    let kept = results.first().map_or(0, |r| r.kept);
    let ok = kept > 0 && results.iter().all(|r| r.report.ci_union.is_some());
    let report = EffectReport {
        status: if ok { "ok" } else { "no_valid_graphs" },
        config: cfg,
        variables: names,
        alpha1: a1,
        heuristic,
        c_star,
        threshold: batch.as_ref().map(|b| b.threshold),
        kept,
        m: cfg.m,
        kept_pct: 100.0 * kept as f64 / cfg.m as f64,
        results,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    crate::emit(out, &json)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::NoValidGraphs(json))
    }
}
