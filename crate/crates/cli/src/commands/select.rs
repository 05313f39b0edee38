//! `cssdpp select`: one selection, its residuals and wall time.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;

use cssdpp_core::linalg::{rank_restricted_residual, Norm};
use cssdpp_core::samplers::select;
use cssdpp_core::RngState;

use crate::algo::{algo_label, parse_algo, AlgoDefaults};
use crate::dataset::SourceArgs;

#[derive(clap::Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Algorithm token, e.g. dpp, vs, double-phase:c=30
    #[arg(long)]
    pub algo: String,

    #[arg(long)]
    pub k: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Rejection-sampler theta (> 1)
    #[arg(long, default_value_t = 2.0)]
    pub theta: f64,

    /// Double-phase preselection size (defaults to 10k)
    #[arg(long)]
    pub c: Option<usize>,

    /// Write the result record as JSON
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SelectRecord {
    dataset: String,
    algorithm: String,
    k: usize,
    seed: u64,
    indices: Vec<usize>,
    frobenius_residual: f64,
    spectral_residual: f64,
}

pub fn run(args: SelectArgs) -> Result<()> {
    let data = args.source.load(args.k, args.seed)?;
    let kind = parse_algo(
        &args.algo,
        &AlgoDefaults {
            k: args.k,
            theta: args.theta,
            c: args.c,
        },
    )?;

    let start = Instant::now();
    let s = select(&data.x, args.k, kind, &RngState::new(args.seed))?;
    let wall = start.elapsed();
    let frob = rank_restricted_residual(&data.x, &s, args.k, Norm::Frobenius)?;
    let spec = rank_restricted_residual(&data.x, &s, args.k, Norm::Spectral)?;

    println!("dataset:   {}", data.id);
    println!("algorithm: {}", algo_label(&kind));
    println!("S:         {:?}", s.indices());
    println!("frobenius residual: {frob}");
    println!("spectral residual:  {spec}");
    println!("selection wall time: {wall:?}");

    if let Some(path) = args.out {
        let record = SelectRecord {
            dataset: data.id,
            algorithm: algo_label(&kind),
            k: args.k,
            seed: args.seed,
            indices: s.indices().to_vec(),
            frobenius_residual: frob,
            spectral_residual: spec,
        };
        std::fs::write(&path, serde_json::to_string_pretty(&record)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
