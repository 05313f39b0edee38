//! `cssdpp bench`: repeated selections per algorithm, with optional
//! best-of-batch boosting. Result files are bit-identical for identical
//! configs and seeds, whatever the thread count.

use std::path::PathBuf;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use cssdpp_core::linalg::{best_rank_k_error, rank_restricted_residual, Norm};
use cssdpp_core::samplers::select;
use cssdpp_core::{DataMatrix, RngState, SelectorKind};

use crate::algo::{algo_label, parse_algo_list, AlgoDefaults};
use crate::dataset::SourceArgs;

#[derive(clap::Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Comma-separated algorithm tokens
    #[arg(long, default_value = "dpp,vs,largest-lev,pivoted-qr,double-phase")]
    pub algo: String,

    #[arg(long)]
    pub k: usize,

    /// Repetitions per algorithm
    #[arg(long, default_value_t = 50)]
    pub reps: usize,

    /// Boosting rounds (0 disables boosting)
    #[arg(long, default_value_t = 0)]
    pub boost_rounds: usize,

    /// Draws per boosting round (the minimum residual is kept)
    #[arg(long, default_value_t = 50)]
    pub boost_batch: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 2.0)]
    pub theta: f64,

    #[arg(long)]
    pub c: Option<usize>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format for --out
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    pub format: String,
}

#[derive(Serialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    pub errors: Vec<f64>,
    pub boosted: Vec<f64>,
}

pub fn run(args: BenchArgs) -> Result<()> {
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }
    let data = args.source.load(args.k, args.seed)?;
    let kinds = parse_algo_list(
        &args.algo,
        &AlgoDefaults {
            k: args.k,
            theta: args.theta,
            c: args.c,
        },
    )?;
    if kinds.is_empty() {
        bail!("no algorithms given");
    }

    let floor = best_rank_k_error(&data.x, args.k, Norm::Frobenius)?;
    let mut records = Vec::with_capacity(kinds.len());
    for (a, kind) in kinds.iter().enumerate() {
        let root = RngState::new(args.seed).substream(a as u64);
        let errors = residual_batch(&data.x, args.k, *kind, &root.substream(0), args.reps)?;
        for &e in &errors {
            if e < floor - 1e-9 {
                bail!("residual {e} below the best-rank-k floor {floor}");
            }
        }
        let boosted: Vec<f64> = (0..args.boost_rounds)
            .map(|round| {
                let batch = residual_batch(
                    &data.x,
                    args.k,
                    *kind,
                    &root.substream(1 + round as u64),
                    args.boost_batch,
                )?;
                Ok(batch.into_iter().fold(f64::INFINITY, f64::min))
            })
            .collect::<Result<_>>()?;
        records.push(BenchRecord {
            dataset: data.id.clone(),
            algorithm: algo_label(kind),
            k: args.k,
            seed: args.seed,
            errors,
            boosted,
        });
    }

    for r in &records {
        let mean = r.errors.iter().sum::<f64>() / r.errors.len() as f64;
        let min = r.errors.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{:<24} reps {:>4}  mean {:.6}  min {:.6}{}",
            r.algorithm,
            r.errors.len(),
            mean,
            min,
            if r.boosted.is_empty() {
                String::new()
            } else {
                format!(
                    "  boosted-best {:.6}",
                    r.boosted.iter().cloned().fold(f64::INFINITY, f64::min)
                )
            }
        );
    }

    if let Some(path) = &args.out {
        let payload = match args.format.as_str() {
            "json" => serde_json::to_string_pretty(&records)? + "\n",
            "csv" => records_to_csv(&records)?,
            _ => unreachable!(),
        };
        std::fs::write(path, payload)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Per-repetition Frobenius residuals, parallel over derived substreams so
/// the values are independent of the thread count.
fn residual_batch(
    x: &DataMatrix,
    k: usize,
    kind: SelectorKind,
    root: &RngState,
    reps: usize,
) -> Result<Vec<f64>> {
    let out: Vec<Result<f64, cssdpp_core::CssError>> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = select(x, k, kind, &root.substream(r as u64))?;
            rank_restricted_residual(x, &s, k, Norm::Frobenius)
        })
        .collect();
    Ok(out.into_iter().collect::<Result<_, _>>()?)
}

fn records_to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["dataset", "algorithm", "k", "seed", "kind", "rep", "value"])?;
    for r in records {
        for (i, v) in r.errors.iter().enumerate() {
            w.write_record([
                r.dataset.as_str(),
                r.algorithm.as_str(),
                &r.k.to_string(),
                &r.seed.to_string(),
                "error",
                &i.to_string(),
                &v.to_string(),
            ])?;
        }
        for (i, v) in r.boosted.iter().enumerate() {
            w.write_record([
                r.dataset.as_str(),
                r.algorithm.as_str(),
                &r.k.to_string(),
                &r.seed.to_string(),
                "boosted",
                &i.to_string(),
                &v.to_string(),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
