//! `cssdpp risk`: Monte-Carlo excess risks of sketched regression next to
//! their closed-form bounds.

use std::path::PathBuf;

use anyhow::Result;
use nalgebra::DVector;
use serde::Serialize;

use cssdpp_core::bounds::{excess_risk_bound, RiskBoundKind, RiskParams};
use cssdpp_core::linalg::{effective_sparsity, k_leverage_scores};
use cssdpp_core::regression::{excess_risk_mc, RegressionProblem, RiskEstimator};
use cssdpp_core::RngState;

use crate::algo::{algo_label, parse_algo_list, AlgoDefaults};
use crate::dataset::SourceArgs;

#[derive(clap::Args)]
pub struct RiskArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    #[arg(long)]
    pub k: usize,

    /// Subset selectors to evaluate
    #[arg(long, default_value = "dpp")]
    pub algo: String,

    /// Noise variance of the synthetic responses
    #[arg(long, default_value_t = 1.0)]
    pub noise_var: f64,

    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 2.0)]
    pub theta: f64,

    #[arg(long)]
    pub c: Option<usize>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    pub format: String,
}

#[derive(Serialize)]
struct RiskRow {
    estimator: String,
    mean: f64,
    stderr: f64,
    bound: Option<f64>,
    bound_name: Option<String>,
}

pub fn run(args: RiskArgs) -> Result<()> {
    let data = args.source.load(args.k, args.seed)?;
    let x = data.x;
    let k = args.k;
    let n = x.n_rows();
    let d = x.n_cols();
    let svd = x.svd();
    let rank = svd.rank;
    let sigma_k1 = svd.sigma_or_zero(k);
    let profile = k_leverage_scores(svd, k)?;
    let p_eff = effective_sparsity(&profile, args.theta)?;

    let state = RngState::new(args.seed);
    let mut rng = state.substream(0xA0).rng();
    let w_star = DVector::from_fn(d, |_, _| {
        rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
    });
    let problem = RegressionProblem::new(x, w_star.clone(), args.noise_var)?;

    let base = RiskParams {
        w_star_norm: Some(w_star.norm()),
        sigma_k_plus_1: Some(sigma_k1),
        noise_variance: Some(args.noise_var),
        n_rows: Some(n),
        k: Some(k),
        p: Some(profile.sparsity_p),
        p_eff: Some(p_eff),
        theta: Some(args.theta),
        rank: Some(rank),
        ..Default::default()
    };
    let ols_risk = excess_risk_bound(RiskBoundKind::Ols, &base)?;
    let pcr_bound = excess_risk_bound(RiskBoundKind::Pcr, &base)?;
    let dpp_bound = excess_risk_bound(RiskBoundKind::Dpp, &base)?;
    let cond_bound = excess_risk_bound(RiskBoundKind::DppConditional, &base)?;

    let mut rows = Vec::new();
    let (ols_mean, ols_se) = excess_risk_mc(
        &problem,
        RiskEstimator::FullOls,
        args.trials,
        &state.substream(0xB0),
    )?;
    rows.push(RiskRow {
        estimator: "full-ols".into(),
        mean: ols_mean,
        stderr: ols_se,
        bound: Some(ols_risk),
        bound_name: Some("ols exact risk".into()),
    });

    let kinds = parse_algo_list(
        &args.algo,
        &AlgoDefaults {
            k,
            theta: args.theta,
            c: args.c,
        },
    )?;
    for (i, kind) in kinds.iter().enumerate() {
        let (mean, stderr) = excess_risk_mc(
            &problem,
            RiskEstimator::ColumnSubset { kind: *kind, k },
            args.trials,
            &state.substream(0xC0 + i as u64),
        )?;
        let (bound, bound_name) = match kind {
            cssdpp_core::SelectorKind::ProjectionDpp => {
                (Some(dpp_bound), Some("dpp sparsity bound".into()))
            }
            cssdpp_core::SelectorKind::RejectionDpp { .. } => {
                (Some(cond_bound), Some("dpp conditional bound".into()))
            }
            _ => (None, None),
        };
        rows.push(RiskRow {
            estimator: algo_label(kind),
            mean,
            stderr,
            bound,
            bound_name,
        });
    }

    println!(
        "dataset {} | k {k} | N {n} | rank {rank} | p {} | p_eff({}) {p_eff} | \
         |w*| {:.4} | sigma_{} {:.4e} | v {}",
        data.id,
        profile.sparsity_p,
        args.theta,
        w_star.norm(),
        k + 1,
        sigma_k1,
        args.noise_var
    );
    println!("reference bounds: pcr {pcr_bound:.6e}");
    println!(
        "{:<24} {:>14} {:>12} {:>14}  bound",
        "estimator", "mc mean", "stderr", "bound"
    );
    for r in &rows {
        println!(
            "{:<24} {:>14.6e} {:>12.3e} {:>14}  {}",
            r.estimator,
            r.mean,
            r.stderr,
            r.bound
                .map(|b| format!("{b:.6e}"))
                .unwrap_or_else(|| "-".into()),
            r.bound_name.clone().unwrap_or_default()
        );
    }

    if let Some(path) = &args.out {
        let payload = match args.format.as_str() {
            "json" => serde_json::to_string_pretty(&rows)? + "\n",
            "csv" => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["estimator", "mean", "stderr", "bound", "bound_name"])?;
                for r in &rows {
                    w.write_record([
                        r.estimator.as_str(),
                        &r.mean.to_string(),
                        &r.stderr.to_string(),
                        &r.bound.map(|b| b.to_string()).unwrap_or_default(),
                        r.bound_name.as_deref().unwrap_or(""),
                    ])?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            _ => unreachable!(),
        };
        std::fs::write(path, payload)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
