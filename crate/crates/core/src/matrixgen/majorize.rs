//! Majorization checks for prescribed diagonal/spectrum feasibility.

/// Why a `(scores, spectrum)` pair is infeasible, if it is.
///
/// The pair is feasible iff the zero-padded spectrum majorizes the score
/// vector: sorted-decreasing prefix sums of the spectrum dominate those of
/// the scores, with equal totals.
pub fn majorization_violation(ell: &[f64], sigma_sq: &[f64]) -> Option<String> {
    if ell
        .iter()
        .chain(sigma_sq)
        .any(|x| *x < -1e-12 || !x.is_finite())
    {
        return Some("negative or non-finite entries".into());
    }
    if sigma_sq.len() > ell.len() {
        return Some(format!(
            "spectrum has {} entries for only {} columns",
            sigma_sq.len(),
            ell.len()
        ));
    }
    let d = ell.len();
    let mut l = ell.to_vec();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut s = sigma_sq.to_vec();
    s.resize(d, 0.0);
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let total_l: f64 = l.iter().sum();
    let total_s: f64 = s.iter().sum();
    let scale = total_s.abs().max(1.0);
    if (total_l - total_s).abs() > 1e-8 * scale {
        return Some(format!(
            "sums differ: scores add to {total_l}, spectrum to {total_s}"
        ));
    }

    let mut acc_l = 0.0;
    let mut acc_s = 0.0;
    for z in 0..d {
        acc_l += l[z];
        acc_s += s[z];
        if acc_l > acc_s + 1e-10 * scale {
            return Some(format!(
                "prefix sum violated at position {}: {acc_l} > {acc_s}",
                z + 1
            ));
        }
    }
    None
}

/// True iff the zero-padded spectrum majorizes the scores.
pub fn check_majorization(ell: &[f64], sigma_sq: &[f64]) -> bool {
    majorization_violation(ell, sigma_sq).is_none()
}
