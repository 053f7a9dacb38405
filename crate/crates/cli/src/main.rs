use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod config;
mod data;
mod discover;
mod effect;
mod error;
mod knowledge;
mod plot;
mod simulate;

use config::{AdjustChoice, LevelChoice, OrientChoice, RunConfig};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "pcsel", version, about = "Post-selection confidence intervals for causal effects after tiered PC")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "PCSEL_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the resampled tiered PC search and write every output graph.
    Discover(RunArgs),
    /// Resample, screen, estimate and report the union confidence interval.
    Effect(RunArgs),
    /// Run a simulation study and write one CSV row per method.
    Bench(bench::BenchArgs),
    /// Group bench rows into per-figure series.
    PlotData(plot::PlotArgs),
    /// Draw a random linear SEM and write a dataset from it.
    Simulate(simulate::SimulateArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// Repeat a run from the config echoed in an earlier output; other run
    /// flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV with a header row of variable names.
    #[arg(long, required_unless_present = "config")]
    data: Option<PathBuf>,
    /// Tier assignment, e.g. `A,B:1;C,D:2`.
    #[arg(long)]
    tiers: Option<String>,
    /// Forbidden directed edge `X->Y`; repeatable.
    #[arg(long = "forbid")]
    forbid: Vec<String>,
    /// Adjacency `X-Y` every kept graph must contain; repeatable.
    #[arg(long = "require")]
    require: Vec<String>,
    /// Comma-separated variables on which graph validity is checked.
    #[arg(long)]
    scope: Option<String>,
    #[arg(long)]
    exposure: Option<String>,
    #[arg(long)]
    outcome: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long, default_value_t = 0.025)]
    nu: f64,
    /// Number of resampled runs.
    #[arg(short = 'M', long = "m", default_value_t = 100)]
    m: usize,
    /// A single value, or a comma-separated grid searched by the
    /// kept-percentage heuristic.
    #[arg(long = "c-star", value_delimiter = ',', default_value = "0.01")]
    c_star: Vec<f64>,
    #[arg(long, default_value_t = 7)]
    max_adj: usize,
    #[arg(long)]
    max_cond_size: Option<usize>,
    /// Truncate draws at this many standard deviations.
    #[arg(long)]
    truncation: Option<f64>,
    /// Fisher z with the conventional 1/2 factor.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    half_factor: bool,
    #[arg(long, value_enum, default_value_t = OrientChoice::Majority)]
    orient: OrientChoice,
    #[arg(long, value_enum, default_value_t = AdjustChoice::Parents)]
    adjust: AdjustChoice,
    #[arg(long, value_enum, default_value_t = LevelChoice::Strict)]
    level: LevelChoice,
    /// Master seed; drawn from system entropy and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (`effect`) or directory (`discover`); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write each graph as DOT with variable names (`discover`).
    #[arg(long)]
    dot: bool,
}

impl RunArgs {
    fn resolve(&self) -> CliResult<RunConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| error::io_err(path, e))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            // accept a bare config or a full report carrying one
            let cfg = value.get("config").cloned().unwrap_or(value);
            let cfg: RunConfig = serde_json::from_value(cfg)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            cfg.validate()?;
            return Ok(cfg);
        }
        let cfg = RunConfig {
            input: self.data.clone().expect("clap requires --data"),
            tiers: self.tiers.clone(),
            forbid: self.forbid.clone(),
            require: self.require.clone(),
            scope: self.scope.clone(),
            exposure: self.exposure.clone(),
            outcome: self.outcome.clone(),
            gamma: self.gamma,
            nu: self.nu,
            m: self.m,
            c_star: self.c_star.clone(),
            max_adj: self.max_adj,
            max_cond_size: self.max_cond_size,
            truncation: self.truncation,
            half_factor: self.half_factor,
            orient: self.orient,
            adjust: self.adjust,
            level: self.level,
            seed: seed_or_entropy(self.seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

/// Writes `text` to `out`, or stdout.
pub fn emit(out: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| error::io_err(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Discover(a) => discover::run(&a.resolve()?, a.out.as_deref(), a.dot),
        Command::Effect(a) => effect::run(&a.resolve()?, a.out.as_deref()),
        Command::Bench(a) => bench::run(&a),
        Command::PlotData(a) => plot::run(&a),
        Command::Simulate(a) => simulate::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
