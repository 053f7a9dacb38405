use std::path::PathBuf;

use clap::Args;
use pcsel::simulation::{draw_and_scale_weights, random_dag, sample_sem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{io_err, CliResult};

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 10)]
    d: usize,
    #[arg(long, default_value_t = 7.0)]
    expected_neighbors: f64,
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output; the generating graph goes to `<out>.truth.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Truth {
    seed: u64,
    variables: Vec<String>,
    /// `(from, to, weight)`.
    edges: Vec<(usize, usize, f64)>,
    /// Total effect of row variable on column variable.
    total_effects: Vec<Vec<f64>>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let seed = crate::seed_or_entropy(args.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dag = random_dag(args.d, args.expected_neighbors, &mut rng)?;
    let wd = draw_and_scale_weights(&dag, &mut rng);
    let x = sample_sem(&wd, args.n, &mut rng)?;
    let file = std::fs::File::create(&args.out).map_err(|e| io_err(&args.out, e))?;
    crate::data::write_csv(&x, std::io::BufWriter::new(file))?;
    let t = wd.total_effects();
    let truth = Truth {
        seed,
        variables: x.names().to_vec(),
        edges: dag.edges().into_iter().map(|(a, b)| (a, b, wd.weight(a, b))).collect(),
        total_effects: (0..args.d).map(|i| (0..args.d).map(|j| t[(i, j)]).collect()).collect(),
    };
    let mut p = args.out.clone().into_os_string();
    p.push(".truth.json");
    let p = PathBuf::from(p);
    std::fs::write(&p, serde_json::to_string_pretty(&truth).expect("truth serialises") + "\n")
        .map_err(|e| io_err(&p, e))
}
