use std::path::{Path, PathBuf};

use clap::Args;
use pcsel::simulation::{run_scenario, BenchRecord, ScenarioConfig};
use pcsel::stats::Truncation;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, CliResult};

#[derive(Args)]
pub struct BenchArgs {
    /// Figure preset: 1 (M = 50 over the c* grid), 2 (M = 100), 3 (varying
    /// M and n at c* = 0.01).
    #[arg(long, conflicts_with_all = ["preset", "config"])]
    paper_fig: Option<u8>,
    /// Named preset: dense, sparse or truncated.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON file with `{"scenarios": [...]}`, e.g. an earlier echo.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the replicate count of every scenario.
    #[arg(long)]
    replicates: Option<usize>,
    /// Master seed; drawn from system entropy and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output; stdout when absent. The resolved config is written next
    /// to it as `<out>.config.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the config echo when the CSV goes to stdout.
    #[arg(long)]
    echo: Option<PathBuf>,
    /// Print the resolved config and exit without running.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub scenarios: Vec<ScenarioConfig>,
}

fn named(name: &str, cfg: ScenarioConfig) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        ..cfg
    }
}

/// Sample sizes swept in the third figure.
const FIG3_NS: [usize; 4] = [250, 500, 1000, 2000];

pub fn preset_scenarios(fig: Option<u8>, preset: Option<&str>, seed: u64) -> CliResult<Vec<ScenarioConfig>> {
    let dense = ScenarioConfig::dense(seed);
    Ok(match (fig, preset) {
        (Some(1), _) => vec![named("fig1", dense)],
        (Some(2), _) => vec![named("fig2", ScenarioConfig { ms: vec![100], ..dense })],
        (Some(3), _) => {
            let at_001 = ScenarioConfig {
                c_stars: vec![0.01],
                heuristic: false,
                ..dense
            };
            let mut v = vec![named(
                "fig3_m",
                ScenarioConfig {
                    ms: vec![10, 25, 50, 100],
                    ..at_001.clone()
                },
            )];
            v.extend(FIG3_NS.iter().map(|&n| named("fig3_n", ScenarioConfig { n, ..at_001.clone() })));
            v
        }
        (Some(f), _) => return Err(CliError::Config(format!("no figure preset {f}"))),
        (None, Some("dense")) => vec![dense],
        (None, Some("sparse")) => vec![ScenarioConfig::sparse(seed)],
        (None, Some("truncated")) => vec![named(
            "truncated",
            ScenarioConfig {
                truncation: Truncation::Symmetric(1.5),
                ..dense
            },
        )],
        (None, Some(p)) => return Err(CliError::Config(format!("unknown preset `{p}`"))),
        (None, None) => return Err(CliError::Config("one of --paper-fig, --preset or --config is required".into())),
    })
}

fn load_config(path: &Path) -> CliResult<BenchConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn resolve(args: &BenchArgs) -> CliResult<BenchConfig> {
    let mut cfg = match &args.config {
        Some(p) => {
            let mut c = load_config(p)?;
            if let Some(s) = args.seed {
                c.scenarios.iter_mut().for_each(|sc| sc.master_seed = s);
            }
            c
        }
        None => BenchConfig {
            scenarios: preset_scenarios(args.paper_fig, args.preset.as_deref(), crate::seed_or_entropy(args.seed))?,
        },
    };
    if let Some(r) = args.replicates {
        cfg.scenarios.iter_mut().for_each(|s| s.replicates = r);
    }
    if cfg.scenarios.is_empty() {
        return Err(CliError::Config("no scenarios".into()));
    }
    for s in &cfg.scenarios {
        s.validate().map_err(|e| CliError::Config(format!("scenario `{}`: {e}", s.name)))?;
    }
    Ok(cfg)
}

pub fn records_to_csv(records: &[BenchRecord]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    let cfg = resolve(args)?;
    let echo = serde_json::to_string_pretty(&cfg).expect("config serialises") + "\n";
    if args.dry_run {
        print!("{echo}");
        return Ok(());
    }
    let mut records = Vec::new();
    for s in &cfg.scenarios {
        records.extend(run_scenario(s)?);
    }
    let echo_path = args.echo.clone().or_else(|| {
        args.out.as_ref().map(|o| {
            let mut p = o.clone().into_os_string();
            p.push(".config.json");
            PathBuf::from(p)
        })
    });
    if let Some(p) = &echo_path {
        std::fs::write(p, echo).map_err(|e| io_err(p, e))?;
    }
    crate::emit(args.out.as_deref(), &records_to_csv(&records)?)
}
