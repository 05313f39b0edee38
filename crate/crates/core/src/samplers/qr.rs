//! QR with column pivoting and the double-phase selector built on it.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{CssError, Result};
use crate::linalg::{k_leverage_scores, DataMatrix};
use crate::samplers::multinomial::sample_categorical;
use crate::subsets::SubsetSelection;

/// Fraction of the reference column norm below which a downdated norm is
/// recomputed from scratch instead of trusted.
const DOWNDATE_RECOMPUTE: f64 = 1e-6;

/// First `k` pivot columns of Householder QR with column pivoting: greedily
/// pick the column with the largest residual norm, eliminate it, and
/// downdate the remaining norms. Ties break toward the smallest column
/// index. A downdated norm that has shrunk below `1e-6` times its reference
/// value is recomputed exactly before it is trusted again.
pub fn pivoted_qr_pivots(m: &DMatrix<f64>, k: usize) -> Result<Vec<usize>> {
    let (rows, cols) = m.shape();
    if k == 0 || k > cols || k > rows {
        return Err(CssError::Rank(format!(
            "cannot take {k} pivots from a {rows} x {cols} matrix"
        )));
    }
    let mut r = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut norms_sq: Vec<f64> = (0..cols).map(|j| r.column(j).norm_squared()).collect();
    let mut ref_norms_sq = norms_sq.clone();
    let scale = norms_sq.iter().cloned().fold(0.0, f64::max);
    let rank_floor = (1e-12f64).powi(2) * scale;

    for step in 0..k {
        let mut pivot = step;
        for j in step + 1..cols {
            if norms_sq[j] > norms_sq[pivot] {
                pivot = j;
            }
        }
        if norms_sq[pivot] <= rank_floor {
            return Err(CssError::Rank(format!(
                "rank deficiency at pivot {step}: largest residual norm is {:.2e}",
                norms_sq[pivot].max(0.0).sqrt()
            )));
        }
        if pivot != step {
            r.swap_columns(step, pivot);
            perm.swap(step, pivot);
            norms_sq.swap(step, pivot);
            ref_norms_sq.swap(step, pivot);
        }

        // Householder reflector on rows step.. of column step
        let x_norm = r.view((step, step), (rows - step, 1)).norm();
        if x_norm <= 0.0 {
            return Err(CssError::Rank(format!("zero pivot column at step {step}")));
        }
        let alpha = if r[(step, step)] >= 0.0 {
            -x_norm
        } else {
            x_norm
        };
        let mut v: Vec<f64> = (step..rows).map(|i| r[(i, step)]).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if v_norm_sq > 0.0 {
            let beta = 2.0 / v_norm_sq;
            for j in step..cols {
                let dot: f64 = (step..rows).map(|i| v[i - step] * r[(i, j)]).sum();
                let f = beta * dot;
                for i in step..rows {
                    r[(i, j)] -= f * v[i - step];
                }
            }
        }
        r[(step, step)] = alpha;

        for j in step + 1..cols {
            let t = r[(step, j)];
            norms_sq[j] -= t * t;
            if norms_sq[j] < DOWNDATE_RECOMPUTE * DOWNDATE_RECOMPUTE * ref_norms_sq[j] {
                let exact = r.view((step + 1, j), (rows - step - 1, 1)).norm_squared();
                norms_sq[j] = exact;
                ref_norms_sq[j] = exact;
            }
        }
    }
    Ok(perm[..k].to_vec())
}

/// Column subset from pivoted QR on the data matrix itself.
pub fn pivoted_qr_select(x: &DataMatrix, k: usize) -> Result<SubsetSelection> {
    let pivots = pivoted_qr_pivots(x.values(), k)?;
    SubsetSelection::distinct(pivots, x.n_cols())
}

/// Double-phase selection: preselect `c > k` columns by i.i.d.
/// k-leverage-score draws, rescale each kept column by `1 / sqrt(c p_j)`,
/// and run pivoted QR for `k` columns on the reduced `k x c` sketch.
/// Duplicate draws are collapsed before the QR phase. A phase-1 batch with
/// fewer than `k` usable columns is redrawn, up to 100 times.
pub fn double_phase_select<R: Rng + ?Sized>(
    x: &DataMatrix,
    k: usize,
    c: usize,
    rng: &mut R,
) -> Result<SubsetSelection> {
    if c <= k {
        return Err(CssError::InvalidInput(format!(
            "preselection size c = {c} must exceed k = {k}"
        )));
    }
    let svd = x.svd();
    if k > svd.rank {
        return Err(CssError::Rank(format!("k = {k} exceeds rank {}", svd.rank)));
    }
    let profile = k_leverage_scores(svd, k)?;
    let weights = profile.multinomial_weights();
    let vk = svd.v_k(k);

    for _ in 0..100 {
        let mut drawn: Vec<usize> = (0..c)
            .map(|_| sample_categorical(&weights, rng))
            .collect::<Result<_>>()?;
        drawn.sort_unstable();
        drawn.dedup();
        if drawn.len() < k {
            continue;
        }
        let mut sketch = DMatrix::zeros(k, drawn.len());
        for (col, &j) in drawn.iter().enumerate() {
            let scale = 1.0 / (c as f64 * weights[j]).sqrt();
            for i in 0..k {
                sketch[(i, col)] = vk[(j, i)] * scale;
            }
        }
        match pivoted_qr_pivots(&sketch, k) {
            Ok(pivots) => {
                let indices: Vec<usize> = pivots.iter().map(|&p| drawn[p]).collect();
                return SubsetSelection::distinct(indices, x.n_cols());
            }
            Err(CssError::Rank(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(CssError::InvariantViolation(format!(
        "phase 1 failed to produce {k} usable columns in 100 batches of {c} draws"
    )))
}
