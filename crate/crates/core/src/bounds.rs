//! Closed-form multiplicative error bounds and excess-risk bounds.
//!
//! Every factor multiplies the squared best-rank-k error; reports carry
//! both the factor and the resulting bound value.

use crate::error::{CssError, Result};
use crate::linalg::Norm;
use crate::samplers::SelectorKind;

/// A named bound evaluated for one `(matrix, k, selector)` triple.
///
/// `bound_value = bound_factor * reference_error_sq`, on the squared-norm
/// scale. A raw factor below one is tightened to one: no selection can
/// beat the best rank-k error.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub selector: SelectorKind,
    pub norm: Norm,
    pub bound_factor: f64,
    pub bound_value: f64,
    pub inputs: BoundInputs,
}

/// The scalar inputs a bound was evaluated with (only those applicable).
#[derive(Debug, Clone, Default)]
pub struct BoundInputs {
    pub k: usize,
    pub d: usize,
    pub p: Option<usize>,
    pub p_eff: Option<usize>,
    pub theta: Option<f64>,
    pub beta: Option<f64>,
}

impl BoundReport {
    pub fn new(
        selector: SelectorKind,
        norm: Norm,
        raw_factor: f64,
        reference_error_sq: f64,
        inputs: BoundInputs,
    ) -> Self {
        let bound_factor = raw_factor.max(1.0);
        BoundReport {
            selector,
            norm,
            bound_factor,
            bound_value: bound_factor * reference_error_sq,
            inputs,
        }
    }
}

/// Volume-sampling factor: `k + 1` in Frobenius norm; `(d - k)(k + 1)` in
/// spectral norm, where the spectral bound multiplies the squared
/// *Frobenius* best-rank-k error.
pub fn vs_bound(k: usize, d: usize, norm: Norm) -> Result<f64> {
    if k >= d {
        return Err(CssError::InvalidInput(format!(
            "need k < d, got k={k}, d={d}"
        )));
    }
    Ok(match norm {
        Norm::Frobenius => (k + 1) as f64,
        Norm::Spectral => ((d - k) * (k + 1)) as f64,
    })
}

/// Projection-DPP factor without structural assumptions: `k(d + 1 - k)`,
/// valid in both norms.
pub fn dpp_generic_bound(k: usize, d: usize) -> Result<f64> {
    if k == 0 || k > d {
        return Err(CssError::InvalidInput(format!(
            "need 1 <= k <= d, got k={k}, d={d}"
        )));
    }
    Ok((k * (d + 1 - k)) as f64)
}

/// Projection-DPP factors under exact sparsity `p` and flatness `beta`:
/// spectral `k(p - k)`, Frobenius `1 + beta k (p - k)/(d - k)`.
pub fn dpp_sparse_bounds(k: usize, d: usize, p: usize, beta: f64) -> Result<(f64, f64)> {
    if !(k <= p && p <= d) || k >= d {
        return Err(CssError::InvalidInput(format!(
            "need k <= p <= d and k < d, got k={k}, p={p}, d={d}"
        )));
    }
    if !(1.0 - 1e-9..=(d - k) as f64 + 1e-9).contains(&beta) {
        return Err(CssError::InvalidInput(format!(
            "beta = {beta} outside [1, {}]",
            d - k
        )));
    }
    let spectral = (k * (p - k)) as f64;
    let frobenius = 1.0 + beta * (k * (p - k)) as f64 / (d - k) as f64;
    Ok((spectral, frobenius))
}

/// Conditional projection-DPP factors under effective sparsity
/// `p_eff(theta)`: spectral `(p_eff - k + 1)(k - 1 + theta)`, Frobenius
/// `1 + beta (p_eff + 1 - k)(k - 1 + theta)/(d - k)`, plus the acceptance
/// probability lower bound `1/theta` of the rejection sampler.
pub fn dpp_peff_bounds(
    k: usize,
    d: usize,
    p_eff: usize,
    theta: f64,
    beta: f64,
) -> Result<(f64, f64, f64)> {
    if theta <= 1.0 {
        return Err(CssError::InvalidInput(format!(
            "theta = {theta} must exceed 1"
        )));
    }
    if p_eff < k || k >= d {
        return Err(CssError::InvalidInput(format!(
            "need p_eff >= k and k < d, got p_eff={p_eff}, k={k}, d={d}"
        )));
    }
    let head = (p_eff - k + 1) as f64 * (k as f64 - 1.0 + theta);
    let spectral = head;
    let frobenius = 1.0 + beta * head / (d - k) as f64;
    Ok((spectral, frobenius, 1.0 / theta))
}

/// Multinomial sample size guaranteeing a `(1 + eps)` Frobenius bound with
/// probability `1 - delta`: `ceil(4000 k^2 / eps^2 ln(1/delta))`.
pub fn drmamu_sample_size(k: usize, eps: f64, delta: f64) -> Result<u64> {
    if eps <= 0.0 || !(0.0..=1.0).contains(&delta) || delta == 0.0 {
        return Err(CssError::InvalidInput(format!(
            "need eps > 0 and delta in (0, 1], got eps={eps}, delta={delta}"
        )));
    }
    let s = 4000.0 * (k * k) as f64 / (eps * eps) * (1.0 / delta).ln();
    Ok(s.ceil() as u64)
}

/// Which excess-risk bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiskBoundKind {
    /// Fixed-subset bound via the worst principal angle.
    CssSubset,
    /// Expectation under the projection DPP, exact sparsity `p`.
    Dpp,
    /// Expectation conditioned on the avoiding event, effective sparsity.
    DppConditional,
    /// Principal-component regression.
    Pcr,
    /// Full ordinary least squares.
    Ols,
}

/// Inputs for the excess-risk bounds; only the fields a kind needs must be
/// set.
#[derive(Debug, Clone, Default)]
pub struct RiskParams {
    pub w_star_norm: Option<f64>,
    pub sigma_k_plus_1: Option<f64>,
    pub noise_variance: Option<f64>,
    pub n_rows: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub p_eff: Option<usize>,
    pub theta: Option<f64>,
    pub max_tan_sq: Option<f64>,
    pub rank: Option<usize>,
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| CssError::InvalidInput(format!("missing parameter `{name}` for this bound")))
}

/// Evaluate an excess-risk bound.
pub fn excess_risk_bound(kind: RiskBoundKind, params: &RiskParams) -> Result<f64> {
    let n = need(params.n_rows, "n_rows")? as f64;
    let v = need(params.noise_variance, "noise_variance")?;
    match kind {
        RiskBoundKind::Ols => {
            let rank = need(params.rank, "rank")? as f64;
            Ok(v * rank / n)
        }
        RiskBoundKind::Pcr => {
            let k = need(params.k, "k")? as f64;
            let w = need(params.w_star_norm, "w_star_norm")?;
            let s = need(params.sigma_k_plus_1, "sigma_k_plus_1")?;
            Ok(w * w * s * s / n + v * k / n)
        }
        RiskBoundKind::CssSubset => {
            let k = need(params.k, "k")? as f64;
            let w = need(params.w_star_norm, "w_star_norm")?;
            let s = need(params.sigma_k_plus_1, "sigma_k_plus_1")?;
            let tan = need(params.max_tan_sq, "max_tan_sq")?;
            Ok((1.0 + tan) * w * w * s * s / n + v * k / n)
        }
        RiskBoundKind::Dpp => {
            let k = need(params.k, "k")?;
            let p = need(params.p, "p")?;
            if p < k {
                return Err(CssError::InvalidInput(format!("p = {p} below k = {k}")));
            }
            let w = need(params.w_star_norm, "w_star_norm")?;
            let s = need(params.sigma_k_plus_1, "sigma_k_plus_1")?;
            let bias = 1.0 + (k * (p - k)) as f64;
            Ok(bias * w * w * s * s / n + v * k as f64 / n)
        }
        RiskBoundKind::DppConditional => {
            let k = need(params.k, "k")?;
            let p_eff = need(params.p_eff, "p_eff")?;
            let theta = need(params.theta, "theta")?;
            if theta <= 1.0 || p_eff < k {
                return Err(CssError::InvalidInput(format!(
                    "need theta > 1 and p_eff >= k, got theta={theta}, p_eff={p_eff}"
                )));
            }
            let w = need(params.w_star_norm, "w_star_norm")?;
            let s = need(params.sigma_k_plus_1, "sigma_k_plus_1")?;
            let bias = 1.0 + (k as f64 - 1.0 + theta) * (p_eff - k + 1) as f64;
            Ok(bias * w * w * s * s / n + v * k as f64 / n)
        }
    }
}
