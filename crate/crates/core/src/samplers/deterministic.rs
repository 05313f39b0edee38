//! Deterministic leverage-score selectors.

use crate::error::{CssError, Result};
use crate::linalg::KLeverageProfile;
use crate::subsets::SubsetSelection;

/// The `k` columns with the largest k-leverage scores, ties broken by
/// smallest column index.
pub fn largest_leverage_select(profile: &KLeverageProfile, k: usize) -> Result<SubsetSelection> {
    if k == 0 || k > profile.d() {
        return Err(CssError::InvalidInput(format!(
            "k = {k} out of range for d = {}",
            profile.d()
        )));
    }
    let order = profile.order_by_score();
    SubsetSelection::distinct(order[..k].to_vec(), profile.d())
}

/// Select the top-scoring columns until their cumulative score exceeds
/// `theta`, which must satisfy `0 <= k - theta < 1`. At the admissible
/// boundary `theta = k` the cumulative sum can only reach `theta`, so all
/// columns with nonzero score are returned.
pub fn threshold_select(profile: &KLeverageProfile, theta: f64) -> Result<SubsetSelection> {
    let k = profile.k as f64;
    let eps = k - theta;
    if !(0.0..1.0).contains(&eps) {
        return Err(CssError::InvalidInput(format!(
            "theta = {theta} outside the admissible band (k - 1, k] for k = {}",
            profile.k
        )));
    }
    let order = profile.order_by_score();
    let mut acc = 0.0;
    let mut count = None;
    for (pos, &j) in order.iter().enumerate() {
        acc += profile.scores[j];
        if acc > theta {
            count = Some(pos + 1);
            break;
        }
    }
    let c = count.unwrap_or(profile.sparsity_p);
    SubsetSelection::distinct(order[..c].to_vec(), profile.d())
}
