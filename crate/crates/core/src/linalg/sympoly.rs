//! Elementary symmetric polynomials and spanned volumes.

use nalgebra::DMatrix;

use crate::error::{CssError, Result};

/// `e_ell` of the given values, computed by the stable Newton-triangle
/// recurrence `e_j <- e_j + x * e_{j-1}`. Never goes through roots of a
/// characteristic polynomial. `e_0 = 1`; `e_ell = 0` when `ell` exceeds the
/// number of values.
pub fn elementary_symmetric(values: &[f64], ell: usize) -> f64 {
    if ell > values.len() {
        return 0.0;
    }
    elementary_symmetric_all(values, ell)[ell]
}

/// All of `e_0, .., e_max_degree` at once (same recurrence).
pub fn elementary_symmetric_all(values: &[f64], max_degree: usize) -> Vec<f64> {
    let mut e = vec![0.0; max_degree + 1];
    e[0] = 1.0;
    for &x in values {
        for j in (1..=max_degree).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Spanned volume `Vol_q(A) = sqrt(e_q(sigma_1^2, .., sigma_r^2))`.
pub fn spanned_volume(a: &DMatrix<f64>, q: usize) -> Result<f64> {
    let svd = a.clone().svd(false, false);
    let mut sq: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    sq.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let smax = sq.first().copied().unwrap_or(0.0);
    let rank = sq
        .iter()
        .filter(|&&s| s > (1e-12f64).powi(2) * smax)
        .count();
    if q == 0 || q > rank {
        return Err(CssError::Rank(format!(
            "volume order {q} out of range for rank {rank}"
        )));
    }
    Ok(elementary_symmetric(&sq, q).sqrt())
}
