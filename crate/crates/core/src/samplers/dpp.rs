//! Chain-rule sampling from a fixed-size projection DPP, plus the
//! rejection-sampled variant conditioned on avoiding the low-leverage tail.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{CssError, Result};
use crate::linalg::{effective_sparsity, KLeverageProfile};
use crate::samplers::multinomial::sample_categorical;
use crate::subsets::SubsetSelection;

/// Sample a subset of row indices of `vk` (a `d x k` matrix with
/// orthonormal columns) with probability equal to the squared determinant
/// of the selected `k x k` row block.
///
/// Chain rule: at each step a row is drawn proportionally to its squared
/// norm in the current basis, then the basis is reprojected orthogonally to
/// the selected coordinate and reorthonormalized.
pub fn projection_dpp_sample<R: Rng + ?Sized>(
    vk: &DMatrix<f64>,
    rng: &mut R,
) -> Result<SubsetSelection> {
    let d = vk.nrows();
    let k = vk.ncols();
    let gram_dev = (vk.transpose() * vk - DMatrix::identity(k, k)).norm();
    if gram_dev > 1e-8 {
        return Err(CssError::InvalidInput(format!(
            "basis columns not orthonormal (deviation {gram_dev:.2e})"
        )));
    }

    let mut basis = vk.clone();
    let mut selected = Vec::with_capacity(k);
    for step in 0..k {
        let weights: Vec<f64> = (0..d).map(|i| basis.row(i).norm_squared()).collect();
        let total: f64 = weights.iter().sum();
        if total < 1e-12 {
            return Err(CssError::InvariantViolation(
                "all row norms vanished before k indices were selected".into(),
            ));
        }
        let i = sample_categorical(&weights, rng)?;
        selected.push(i);
        if step + 1 == k {
            break;
        }

        // Subtract from every column its component along the projection of
        // e_i onto the span, zeroing row i...
        let row = basis.row(i).into_owned();
        let row_norm = row.norm();
        let phi = &basis * row.transpose() / row_norm;
        basis -= &phi * (row / row_norm);
        // ...then drop the collapsed direction and reorthonormalize.
        basis = orthonormalize_columns(&basis, basis.ncols() - 1)?;
    }

    SubsetSelection::distinct(selected, d)
}

/// Modified Gram-Schmidt with a second pass, keeping `target` columns.
fn orthonormalize_columns(m: &DMatrix<f64>, target: usize) -> Result<DMatrix<f64>> {
    let mut kept: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(target);
    for j in 0..m.ncols() {
        let mut col = m.column(j).into_owned();
        for q in &kept {
            let proj = q.dot(&col);
            col -= q * proj;
        }
        // re-orthogonalization pass keeps the conditionals normalized after
        // many chain-rule steps
        for q in &kept {
            let proj = q.dot(&col);
            col -= q * proj;
        }
        let norm = col.norm();
        if norm > 1e-8 {
            kept.push(col / norm);
            if kept.len() == target {
                break;
            }
        }
    }
    if kept.len() != target {
        return Err(CssError::InvariantViolation(format!(
            "reprojected basis has rank {} instead of {target}",
            kept.len()
        )));
    }
    let mut out = DMatrix::zeros(m.nrows(), target);
    for (j, q) in kept.iter().enumerate() {
        out.set_column(j, q);
    }
    Ok(out)
}

/// Sample from the projection DPP conditioned on avoiding every column
/// ranked beyond the effective sparsity level `p_eff(theta)` in decreasing
/// score order. Returns the selection and the number of attempts used.
///
/// The acceptance probability is at least `1/theta`, so the expected number
/// of attempts is at most `theta`; the attempt budget is `ceil(100 theta)`.
pub fn rejection_dpp_sample<R: Rng + ?Sized>(
    vk: &DMatrix<f64>,
    profile: &KLeverageProfile,
    theta: f64,
    rng: &mut R,
) -> Result<(SubsetSelection, u64)> {
    if theta <= 1.0 {
        return Err(CssError::InvalidInput(format!(
            "theta must exceed 1, got {theta}"
        )));
    }
    let p_eff = effective_sparsity(profile, theta)?;
    let order = profile.order_by_score();
    let mut forbidden = vec![false; profile.d()];
    for &j in &order[p_eff..] {
        forbidden[j] = true;
    }

    let budget = (100.0 * theta).ceil() as u64;
    for attempt in 1..=budget {
        let s = projection_dpp_sample(vk, rng)?;
        if s.indices().iter().all(|&j| !forbidden[j]) {
            return Ok((s, attempt));
        }
    }
    Err(CssError::RejectionBudget(format!(
        "no accepted sample within {budget} attempts (theta = {theta}); \
         the leverage profile and theta are likely mismatched"
    )))
}
