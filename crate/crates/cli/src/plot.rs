//! Regroups bench rows into one series per line of each figure panel.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use pcsel::simulation::BenchRecord;
use serde::Serialize;

use crate::error::{io_err, CliError, CliResult};

#[derive(Args)]
pub struct PlotArgs {
    /// CSV written by `bench`.
    #[arg(long)]
    input: PathBuf,
    /// JSON output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, PartialEq, Serialize)]
pub struct Panel {
    /// `<scenario>/<quantity>`.
    pub id: String,
    pub x_label: &'static str,
    pub y_label: &'static str,
    pub series: Vec<Series>,
}

type Getter = fn(&BenchRecord) -> Option<f64>;

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    CStar,
    M,
    N,
}

impl Axis {
    fn label(self) -> &'static str {
        match self {
            Axis::CStar => "c_star",
            Axis::M => "M",
            Axis::N => "n",
        }
    }

    fn value(self, r: &BenchRecord) -> Option<f64> {
        match self {
            Axis::CStar => r.c_star,
            Axis::M => r.m.map(|m| m as f64),
            Axis::N => Some(r.n as f64),
        }
    }
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Series name: the method plus whichever coordinates are not on the x axis.
fn label(r: &BenchRecord, axis: Axis) -> String {
    let mut s = r.method.clone();
    if r.method.starts_with("resample") {
        if let Some(hf) = r.half_factor {
            s += &format!(" half_factor={hf}");
        }
        if axis != Axis::M {
            if let Some(m) = r.m {
                s += &format!(" M={m}");
            }
        }
        if axis != Axis::CStar {
            if let Some(c) = r.c_star {
                s += &format!(" c*={c}");
            }
        }
    }
    s
}

pub fn panels(records: &[BenchRecord]) -> Vec<Panel> {
    let mut groups: Vec<(&str, Vec<&BenchRecord>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|(name, _)| *name == r.scenario) {
            Some((_, g)) => g.push(r),
            None => groups.push((&r.scenario, vec![r])),
        }
    }
    let mut out = Vec::new();
    for (name, rows) in groups {
        let ns = distinct(rows.iter().map(|r| r.n as f64));
        let resample = || rows.iter().filter(|r| r.method == "resample");
        let axis = if ns.len() > 1 {
            Axis::N
        } else if distinct(resample().filter_map(|r| r.c_star)).len() > 1 {
            Axis::CStar
        } else {
            Axis::M
        };
        let xs = distinct(rows.iter().filter_map(|r| axis.value(r)));
        let quantities: &[(&str, Getter)] = &[
            ("coverage", |r| Some(r.coverage)),
            ("avg_length_union", |r| Some(r.avg_length_union)),
            ("kept_pct", |r| r.kept_pct),
        ];
        for &(q, get) in quantities {
            let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
            for r in &rows {
                let Some(y) = get(r) else { continue };
                let points = series.entry(label(r, axis)).or_default();
                match axis.value(r) {
                    Some(x) => points.push((x, y)),
                    // baselines do not depend on c* or M; draw them flat
                    None => points.extend(xs.iter().map(|&x| (x, y))),
                }
            }
            if series.is_empty() {
                continue;
            }
            out.push(Panel {
                id: format!("{name}/{q}"),
                x_label: axis.label(),
                y_label: match q {
                    "coverage" => "coverage",
                    "avg_length_union" => "average interval length",
                    _ => "kept graphs (%)",
                },
                series: series
                    .into_iter()
                    .map(|(label, mut pts)| {
                        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                        Series {
                            label,
                            x: pts.iter().map(|p| p.0).collect(),
                            y: pts.iter().map(|p| p.1).collect(),
                        }
                    })
                    .collect(),
            });
        }
    }
    out
}

pub fn run(args: &PlotArgs) -> CliResult<()> {
    let mut rdr = csv::Reader::from_path(&args.input)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.input.display())))?;
    let records = rdr
        .deserialize()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| CliError::Data(format!("{}: row {}: {e}", args.input.display(), k + 1))))
        .collect::<CliResult<Vec<BenchRecord>>>()?;
    let json = serde_json::to_string_pretty(&panels(&records)).expect("panels serialise") + "\n";
    match &args.out {
        Some(p) => std::fs::write(p, json).map_err(|e| io_err(p, e)),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}
