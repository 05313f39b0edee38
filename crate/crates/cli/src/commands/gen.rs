//! `cssdpp gen`: write a generated matrix as CSV plus a JSON sidecar.

use std::path::PathBuf;

use anyhow::{bail, Result};
use serde::Serialize;

use cssdpp_core::linalg::k_leverage_scores;
use cssdpp_core::matrixgen::matrix_generator;
use cssdpp_core::toy::{toy_default_k, toy_spectrum};
use cssdpp_core::RngState;

use crate::dataset::{parse_float_list, parse_leverage_spec, write_csv_matrix};

#[derive(clap::Args)]
pub struct GenArgs {
    /// Built-in spectrum name (proj-3, proj-5, smooth-3, smooth-5,
    /// identity)
    #[arg(long, value_name = "NAME", conflicts_with = "sigma")]
    pub toy: Option<String>,

    /// Explicit singular values, decreasing, comma separated
    #[arg(long, value_name = "LIST")]
    pub sigma: Option<String>,

    /// Leverage profile: `dirichlet:P` (P nonzero scores) or an explicit
    /// comma-separated list summing to k
    #[arg(long, value_name = "SPEC", default_value = "dirichlet:20")]
    pub ell: String,

    /// Target rank of the leverage profile
    #[arg(long)]
    pub k: Option<usize>,

    /// Number of rows
    #[arg(long, default_value_t = 100)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output base path (writes <out>.csv and <out>.json)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct Sidecar {
    n_rows: usize,
    n_cols: usize,
    k: usize,
    seed: u64,
    spectrum: Vec<f64>,
    leverage: Vec<f64>,
    sparsity_p: usize,
    beta: f64,
}

pub fn run(args: GenArgs) -> Result<()> {
    let sigma = match (&args.toy, &args.sigma) {
        (Some(name), _) => {
            toy_spectrum(name).ok_or_else(|| anyhow::anyhow!("unknown toy spectrum `{name}`"))?
        }
        (None, Some(list)) => {
            let s = parse_float_list(list)?;
            if s.windows(2).any(|w| w[0] < w[1]) {
                bail!("--sigma values must be decreasing");
            }
            s
        }
        (None, None) => bail!("provide --toy <name> or --sigma <list>"),
    };
    let d = sigma.len();
    let k = match args
        .k
        .or_else(|| args.toy.as_deref().and_then(toy_default_k))
    {
        Some(k) => k,
        None => bail!("--k is required for this spectrum"),
    };

    let ell = parse_leverage_spec(&args.ell, k, d, args.seed)?;
    let x = matrix_generator(&ell, &sigma, args.n, &RngState::new(args.seed))?;
    let profile = k_leverage_scores(x.svd(), k)?;

    let csv_path = args.out.with_extension("csv");
    let json_path = args.out.with_extension("json");
    if let Some(dir) = csv_path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    write_csv_matrix(&csv_path, &x)?;
    let sidecar = Sidecar {
        n_rows: x.n_rows(),
        n_cols: x.n_cols(),
        k,
        seed: args.seed,
        spectrum: sigma,
        leverage: profile.scores.clone(),
        sparsity_p: profile.sparsity_p,
        beta: profile.beta,
    };
    std::fs::write(&json_path, serde_json::to_string_pretty(&sidecar)?)?;
    println!(
        "wrote {} ({} x {}) and {}",
        csv_path.display(),
        x.n_rows(),
        x.n_cols(),
        json_path.display()
    );
    Ok(())
}
