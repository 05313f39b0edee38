//! k-leverage scores and the quantities derived from them.

use crate::error::{CssError, Result};
use crate::linalg::matrix::SvdBundle;

/// Absolute threshold under which a leverage score counts as zero when the
/// sparsity level `p` is computed. Scores are normalized to sum to `k`, so
/// an absolute threshold at the double-precision SVD noise floor is
/// appropriate.
pub const ZERO_SCORE_THRESHOLD: f64 = 1e-12;

/// The k-leverage profile of a matrix: per-column scores in `[0, 1]`
/// summing to `k`, the sparsity level `p` (count of nonzero scores) and the
/// spectrum flatness `beta`.
#[derive(Debug, Clone)]
pub struct KLeverageProfile {
    pub k: usize,
    pub scores: Vec<f64>,
    pub sparsity_p: usize,
    pub beta: f64,
}

impl KLeverageProfile {
    pub fn d(&self) -> usize {
        self.scores.len()
    }

    /// Column indices ordered by decreasing score, ties broken by smallest
    /// index. This is the ordering used for effective sparsity, threshold
    /// selection and the rejection sampler.
    pub fn order_by_score(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .unwrap()
                .then(a.cmp(&b))
        });
        idx
    }

    /// The multinomial parameter `p_j = score_j / k`.
    pub fn multinomial_weights(&self) -> Vec<f64> {
        self.scores.iter().map(|s| s / self.k as f64).collect()
    }
}

/// Leverage scores of the top-k right-singular subspace: score_j is the
/// squared norm of the j-th row of `V[:, 1..k]`, i.e. the j-th diagonal
/// entry of the orthogonal projector onto that subspace.
pub fn k_leverage_scores(svd: &SvdBundle, k: usize) -> Result<KLeverageProfile> {
    if k == 0 || k > svd.rank {
        return Err(CssError::Rank(format!(
            "k = {k} out of range for rank {}",
            svd.rank
        )));
    }
    let d = svd.v.nrows();
    let vk = svd.v.columns(0, k);
    let scores: Vec<f64> = (0..d).map(|j| vk.row(j).norm_squared()).collect();
    let sparsity_p = scores
        .iter()
        .filter(|&&s| s >= ZERO_SCORE_THRESHOLD)
        .count();
    let sigma = svd.sigma_sq_padded(d);
    let sigma_vals: Vec<f64> = sigma.iter().map(|s| s.sqrt()).collect();
    let beta = if k < d {
        flatness_beta(&sigma_vals, k, d)?
    } else {
        1.0
    };
    Ok(KLeverageProfile {
        k,
        scores,
        sparsity_p,
        beta,
    })
}

/// Spectrum flatness above the cut at `k`:
/// `beta = sigma_{k+1}^2 / mean(sigma_{k+1}^2, .., sigma_d^2)`.
///
/// Lives in `[1, d-k]`; equals 1 for a flat tail and by convention also when
/// the whole tail is zero (the bound term it multiplies is then zero).
pub fn flatness_beta(sigma: &[f64], k: usize, d: usize) -> Result<f64> {
    if k >= d {
        return Err(CssError::InvalidInput(format!(
            "need k < d, got k={k}, d={d}"
        )));
    }
    if sigma.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(CssError::InvalidInput(
            "singular values must be decreasing".into(),
        ));
    }
    let sq = |i: usize| sigma.get(i).copied().unwrap_or(0.0).powi(2);
    let head = sq(k);
    let tail_sum: f64 = (k..d).map(sq).sum();
    if tail_sum <= 0.0 {
        return Ok(1.0);
    }
    Ok(head / (tail_sum / (d - k) as f64))
}

/// Effective sparsity level: the smallest `q` such that the `q` largest
/// scores sum to at least `k - 1 + 1/theta`. Ties among equal scores are
/// broken by smallest column index.
pub fn effective_sparsity(profile: &KLeverageProfile, theta: f64) -> Result<usize> {
    if theta <= 1.0 {
        return Err(CssError::InvalidInput(format!(
            "theta must exceed 1, got {theta}"
        )));
    }
    let threshold = profile.k as f64 - 1.0 + 1.0 / theta;
    let order = profile.order_by_score();
    let mut acc = 0.0;
    for (pos, &j) in order.iter().enumerate() {
        acc += profile.scores[j];
        if acc >= threshold {
            return Ok(pos + 1);
        }
    }
    if acc >= threshold - 1e-9 {
        return Ok(order.len());
    }
    Err(CssError::InvariantViolation(format!(
        "scores sum to {acc}, below the effective-sparsity threshold {threshold}"
    )))
}
