//! Multinomial (i.i.d.) column samplers.

use rand::Rng;

use crate::error::{CssError, Result};
use crate::linalg::{DataMatrix, KLeverageProfile};
use crate::subsets::SubsetSelection;

/// Draw one index from a categorical distribution by inverse CDF over the
/// cumulative weights. Weights must be nonnegative with a positive sum.
pub fn sample_categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
        return Err(CssError::InvariantViolation(
            "categorical weights must be nonnegative with positive sum".into(),
        ));
    }
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last_positive = i;
        }
        acc += w;
        if u < acc {
            return Ok(i);
        }
    }
    // u landed on the float boundary; return the last index of positive mass
    Ok(last_positive)
}

fn multinomial_draws<R: Rng + ?Sized>(
    weights: &[f64],
    s: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if s == 0 {
        return Err(CssError::InvalidInput("need at least one draw".into()));
    }
    (0..s).map(|_| sample_categorical(weights, rng)).collect()
}

/// `s` i.i.d. draws from the k-leverage-score distribution
/// `p_j = score_j / k`. Duplicates are retained.
pub fn leverage_multinomial_sample<R: Rng + ?Sized>(
    profile: &KLeverageProfile,
    s: usize,
    rng: &mut R,
) -> Result<SubsetSelection> {
    let draws = multinomial_draws(&profile.scores, s, rng)?;
    SubsetSelection::with_duplicates(draws, profile.d())
}

/// `s` i.i.d. draws proportional to squared column norms. Duplicates are
/// retained; zero columns are never drawn.
pub fn length_square_sample<R: Rng + ?Sized>(
    x: &DataMatrix,
    s: usize,
    rng: &mut R,
) -> Result<SubsetSelection> {
    let weights: Vec<f64> = (0..x.n_cols())
        .map(|j| x.values().column(j).norm_squared())
        .collect();
    let draws = multinomial_draws(&weights, s, rng)?;
    SubsetSelection::with_duplicates(draws, x.n_cols())
}
