//! Sketched linear regression: sparse least squares on selected columns
//! and Monte-Carlo excess risk.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bounds::{excess_risk_bound, RiskBoundKind, RiskParams};
use crate::error::{CssError, Result};
use crate::linalg::{principal_angles, pseudo_inverse, DataMatrix};
use crate::rng::RngState;
use crate::samplers::{select, SelectorKind};
use crate::subsets::SubsetSelection;

/// A synthetic well-specified regression problem: responses are generated
/// as `X w* + noise` with i.i.d. centered noise of variance `v` (Gaussian
/// here; only the first two moments enter the theory).
#[derive(Debug, Clone)]
pub struct RegressionProblem {
    pub x: DataMatrix,
    pub w_star: DVector<f64>,
    pub noise_variance: f64,
}

impl RegressionProblem {
    pub fn new(x: DataMatrix, w_star: DVector<f64>, noise_variance: f64) -> Result<Self> {
        if w_star.len() != x.n_cols() {
            return Err(CssError::InvalidInput(format!(
                "w* has {} coordinates for {} columns",
                w_star.len(),
                x.n_cols()
            )));
        }
        if noise_variance < 0.0 {
            return Err(CssError::InvalidInput("negative noise variance".into()));
        }
        Ok(RegressionProblem {
            x,
            w_star,
            noise_variance,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.x.n_rows()
    }

    /// Draw a response vector with fresh Gaussian noise.
    pub fn draw_response<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        let mean = self.x.values() * &self.w_star;
        let sd = self.noise_variance.sqrt();
        mean + DVector::from_fn(self.n_rows(), |_, _| {
            sd * rng.sample::<f64, _>(StandardNormal)
        })
    }
}

/// Least squares on the selected columns, scattered back to a `d`-vector:
/// coordinates outside the selection are exactly zero.
pub fn sparse_ols(x: &DataMatrix, y: &DVector<f64>, s: &SubsetSelection) -> Result<DVector<f64>> {
    if s.is_empty() {
        return Err(CssError::InvalidInput("empty selection".into()));
    }
    if y.len() != x.n_rows() {
        return Err(CssError::InvalidInput("response length mismatch".into()));
    }
    let c = x.columns(s.indices());
    let coeffs = pseudo_inverse(&c) * y;
    let mut w = DVector::zeros(x.n_cols());
    for (t, &j) in s.indices().iter().enumerate() {
        w[j] += coeffs[t];
    }
    Ok(w)
}

/// What estimator the Monte-Carlo risk loop evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiskEstimator {
    /// Ordinary least squares on all columns.
    FullOls,
    /// Sparse least squares on a fresh subset drawn by the selector each
    /// trial.
    ColumnSubset { kind: SelectorKind, k: usize },
}

/// Monte-Carlo estimate of the excess risk `E ||X w* - X w||^2 / N`:
/// fresh noise and (for randomized selectors) a fresh subset per trial.
/// Returns the sample mean and its standard error. Trials run in parallel
/// over derived substreams, so the aggregate does not depend on the thread
/// count.
pub fn excess_risk_mc(
    problem: &RegressionProblem,
    estimator: RiskEstimator,
    trials: usize,
    state: &RngState,
) -> Result<(f64, f64)> {
    if trials < 2 {
        return Err(CssError::InvalidInput("need at least two trials".into()));
    }
    let mean_response = problem.x.values() * &problem.w_star;
    let samples: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sub = state.substream(t as u64);
            let mut rng = sub.rng();
            let y = problem.draw_response(&mut rng);
            let w = match estimator {
                RiskEstimator::FullOls => pseudo_inverse(problem.x.values()) * &y,
                RiskEstimator::ColumnSubset { kind, k } => {
                    let s = select(&problem.x, k, kind, &sub.substream(u64::MAX))?;
                    sparse_ols(&problem.x, &y, &s)?
                }
            };
            let diff = problem.x.values() * w - &mean_response;
            Ok(diff.norm_squared() / problem.n_rows() as f64)
        })
        .collect();
    let samples: Vec<f64> = samples.into_iter().collect::<Result<_>>()?;
    let mean = samples.iter().sum::<f64>() / trials as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    Ok((mean, (var / trials as f64).sqrt()))
}

/// Fixed-subset excess-risk bound: the bias factor is one plus the worst
/// squared tangent of the principal angles between the selected coordinate
/// subspace and the top-k right-singular subspace.
pub fn css_risk_bound_for_subset(
    x: &DataMatrix,
    s: &SubsetSelection,
    w_star: &DVector<f64>,
    noise_variance: f64,
    k: usize,
) -> Result<f64> {
    let svd = x.svd();
    if k > svd.rank {
        return Err(CssError::Rank(format!("k = {k} exceeds rank {}", svd.rank)));
    }
    let d = x.n_cols();
    let idx = s.distinct_indices();
    let mut basis = DMatrix::zeros(d, idx.len());
    for (c, &j) in idx.iter().enumerate() {
        basis[(j, c)] = 1.0;
    }
    let vk = svd.v_k(k);
    let angles = principal_angles(&basis, &vk)?;
    let max_tan_sq = angles
        .iter()
        .map(|a| a.tan().powi(2))
        .fold(f64::NEG_INFINITY, f64::max);
    if !max_tan_sq.is_finite() {
        return Err(CssError::Singular(
            "a principal angle reaches pi/2; the bound is vacuous".into(),
        ));
    }
    excess_risk_bound(
        RiskBoundKind::CssSubset,
        &RiskParams {
            w_star_norm: Some(w_star.norm()),
            sigma_k_plus_1: Some(svd.sigma_or_zero(k)),
            noise_variance: Some(noise_variance),
            n_rows: Some(x.n_rows()),
            k: Some(k),
            max_tan_sq: Some(max_tan_sq),
            ..Default::default()
        },
    )
}
