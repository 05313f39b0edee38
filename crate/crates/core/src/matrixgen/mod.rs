//! Random matrices with prescribed spectrum and k-leverage profile.

mod eigensteps;
mod frame;
mod haar;
mod majorize;

pub use eigensteps::{compute_eigensteps, random_eigensteps, EigenstepMatrix};
pub use frame::{givens_frame, reconstruct_frame};
pub use haar::{complete_orthonormal_basis, haar_orthogonal, haar_stiefel};
pub use majorize::{check_majorization, majorization_violation};

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{CssError, Result};
use crate::linalg::DataMatrix;
use crate::rng::RngState;

/// A prescribed leverage-score profile: nonnegative scores summing to the
/// trace of the target Gram (equal to `k` for an orthogonal frame).
#[derive(Debug, Clone)]
pub struct LeverageTarget {
    scores: Vec<f64>,
}

impl LeverageTarget {
    pub fn new(scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() || scores.iter().any(|s| *s < -1e-12 || !s.is_finite()) {
            return Err(CssError::InvalidInput(
                "scores must be nonnegative and finite".into(),
            ));
        }
        Ok(LeverageTarget { scores })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn sum(&self) -> f64 {
        self.scores.iter().sum()
    }

    pub fn sorted_decreasing(&self) -> bool {
        self.scores.windows(2).all(|w| w[0] >= w[1] - 1e-12)
    }

    /// Number of scores above the zero threshold.
    pub fn sparsity(&self) -> usize {
        self.scores.iter().filter(|&&s| s >= 1e-12).count()
    }
}

/// Random leverage profile with `p` nonzero scores on `d` columns, summing
/// to `k`: the nonzero block is `k` times a flat-Dirichlet draw (normalized
/// standard exponentials) conditioned on feasibility for an orthogonal
/// frame, i.e. redrawn until every score is at most 1. A score pinned at
/// exactly 1 is degenerate (its column is deterministically selected and
/// the process loses a dimension), so clipping with proportional
/// redistribution is kept only as a fallback for regimes where the
/// conditioned draw is too rare. Scores are returned sorted decreasingly.
pub fn dirichlet_leverage_profile<R: Rng + ?Sized>(
    k: usize,
    p: usize,
    d: usize,
    rng: &mut R,
) -> Result<LeverageTarget> {
    if k == 0 || p < k || p > d {
        return Err(CssError::Infeasible(format!(
            "need k <= p <= d, got k = {k}, p = {p}, d = {d}"
        )));
    }
    if p == k {
        // feasibility forces every nonzero score to 1
        let mut scores = vec![1.0; k];
        scores.resize(d, 0.0);
        return LeverageTarget::new(scores);
    }

    let draw = |rng: &mut R| -> Vec<f64> {
        let mut block: Vec<f64> = (0..p).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = block.iter().sum();
        for b in &mut block {
            *b *= k as f64 / total;
        }
        block
    };
    let finish = |mut block: Vec<f64>| {
        block.sort_by(|a, b| b.partial_cmp(a).unwrap());
        block.resize(d, 0.0);
        LeverageTarget::new(block)
    };

    // conditioned draw: the acceptance probability is tiny only when p is
    // barely above k, and a single draw is a handful of exponentials
    for _ in 0..100_000 {
        let block = draw(rng);
        if block.iter().all(|&s| s <= 1.0) {
            return finish(block);
        }
    }
    for _ in 0..100 {
        let mut block = draw(rng);
        if redistribute_caps(&mut block) {
            return finish(block);
        }
    }
    Err(CssError::Infeasible(
        "could not draw a feasible capped profile".into(),
    ))
}

/// Clip scores above 1 and spread the excess proportionally over the
/// uncapped ones. Returns false if 20 passes do not settle.
fn redistribute_caps(scores: &mut [f64]) -> bool {
    for _ in 0..20 {
        if scores.iter().all(|&s| s <= 1.0 + 1e-12) {
            for s in scores.iter_mut() {
                *s = s.min(1.0);
            }
            return true;
        }
        let mut excess = 0.0;
        let mut free_sum = 0.0;
        for s in scores.iter_mut() {
            if *s >= 1.0 {
                excess += *s - 1.0;
                *s = 1.0;
            } else {
                free_sum += *s;
            }
        }
        if free_sum <= 0.0 {
            return false;
        }
        let factor = (free_sum + excess) / free_sum;
        for s in scores.iter_mut() {
            if *s < 1.0 {
                *s *= factor;
            }
        }
    }
    false
}

/// Generate an `N x d` matrix with the prescribed singular values and
/// k-leverage profile (`k` is the score total).
///
/// The left factor is Haar on the Stiefel slice (QR of a Gaussian matrix
/// with sign fix), the top-k right-singular block realizes the profile via
/// eigenstep reconstruction, and the remaining right-singular directions
/// come from Gram-Schmidt on Gaussian vectors.
pub fn matrix_generator(
    ell: &LeverageTarget,
    sigma_diag: &[f64],
    n_rows: usize,
    state: &RngState,
) -> Result<DataMatrix> {
    let d = ell.scores().len();
    if sigma_diag.len() != d {
        return Err(CssError::InvalidInput(format!(
            "need {d} singular values, got {}",
            sigma_diag.len()
        )));
    }
    if n_rows < d {
        return Err(CssError::InvalidInput(format!(
            "need at least {d} rows, got {n_rows}"
        )));
    }
    if sigma_diag.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(CssError::InvalidInput(
            "singular values must be sorted decreasingly".into(),
        ));
    }
    let total = ell.sum();
    let k = total.round() as usize;
    if k == 0 || (total - k as f64).abs() > 1e-8 || k > d {
        return Err(CssError::Infeasible(format!(
            "scores must sum to an integer k in [1, {d}], got {total}"
        )));
    }
    if sigma_diag[k.saturating_sub(1)] <= 0.0 {
        return Err(CssError::InvalidInput(
            "the k leading singular values must be positive".into(),
        ));
    }
    let ones = vec![1.0; k];
    if let Some(reason) = majorization_violation(ell.scores(), &ones) {
        return Err(CssError::Infeasible(reason));
    }

    let mut rng = state.rng();

    // Build the top-k right block for the decreasingly sorted profile, then
    // un-permute back to the requested column order.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        ell.scores()[b]
            .partial_cmp(&ell.scores()[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let sorted: Vec<f64> = order.iter().map(|&j| ell.scores()[j]).collect();

    let steps = random_eigensteps(&sorted, &ones, &mut rng)?;
    let frame = reconstruct_frame(&steps, &sorted, &mut rng)?;
    let mut vk = DMatrix::<f64>::zeros(d, k);
    for (pos, &orig) in order.iter().enumerate() {
        for i in 0..k {
            vk[(orig, i)] = frame[(i, pos)];
        }
    }

    let v = complete_orthonormal_basis(&vk, &mut rng)?;
    let u = haar::haar_stiefel_with(n_rows, d, &mut rng);

    let mut scaled = v.transpose();
    for (i, mut row) in scaled.row_iter_mut().enumerate() {
        row *= sigma_diag[i];
    }
    DataMatrix::new(u * scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::k_leverage_scores;
    use approx::assert_relative_eq;

    #[test]
    fn generator_end_to_end() {
        let mut rng = RngState::new(50).rng();
        let ell = dirichlet_leverage_profile(3, 7, 10, &mut rng).unwrap();
        let sigma: Vec<f64> = vec![10.0, 8.0, 5.0, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.01];
        let x = matrix_generator(&ell, &sigma, 25, &RngState::new(51)).unwrap();
        let svd = x.svd();
        // prescribed spectrum
        for i in 0..10 {
            assert_relative_eq!(svd.sigma_or_zero(i), sigma[i], epsilon = 1e-8);
        }
        // prescribed profile
        let prof = k_leverage_scores(svd, 3).unwrap();
        for j in 0..10 {
            assert_relative_eq!(prof.scores[j], ell.scores()[j], epsilon = 1e-8);
        }
        // orthogonality of the right factor is implied by both checks
        assert_eq!(prof.sparsity_p, ell.sparsity());
    }

    #[test]
    fn dirichlet_profiles_feasible() {
        let mut rng = RngState::new(7).rng();
        for trial in 0..1000 {
            let k = 1 + trial % 4;
            let d = 12;
            let p = k + trial % (d - k + 1);
            let t = dirichlet_leverage_profile(k, p, d, &mut rng).unwrap();
            assert_relative_eq!(t.sum(), k as f64, epsilon = 1e-9);
            assert!(t.sorted_decreasing());
            assert_eq!(t.sparsity(), p);
            assert!(check_majorization(t.scores(), &vec![1.0; k]));
        }
    }

    #[test]
    fn dirichlet_degenerate_p_equals_k() {
        let mut rng = RngState::new(9).rng();
        let t = dirichlet_leverage_profile(3, 3, 8, &mut rng).unwrap();
        assert_eq!(&t.scores()[..3], &[1.0, 1.0, 1.0]);
        assert!(t.scores()[3..].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn schur_horn_grid_feasibility_is_sharp() {
        // k = 2, d = 4, unit spectrum: every grid profile that passes the
        // majorization check must reconstruct, every one that fails must
        // be rejected by the pipeline too
        let ones = vec![1.0, 1.0];
        let mut feasible = 0;
        let mut infeasible = 0;
        for ai in 0..=13usize {
            for bi in 0..=ai {
                for ci in 0..=bi {
                    let (a, b, c) = (ai as f64 * 0.1, bi as f64 * 0.1, ci as f64 * 0.1);
                    let rest = 2.0 - a - b - c;
                    if rest < -1e-9 || rest > c + 1e-9 {
                        continue;
                    }
                    let ell = vec![a, b, c, rest.max(0.0)];
                    let ok = check_majorization(&ell, &ones);
                    let mut rng = RngState::new((ai * 100 + bi * 10 + ci) as u64).rng();
                    let built = random_eigensteps(&ell, &ones, &mut rng)
                        .and_then(|steps| reconstruct_frame(&steps, &ell, &mut rng));
                    match (ok, built) {
                        (true, Ok(f)) => {
                            feasible += 1;
                            for (j, &l) in ell.iter().enumerate() {
                                assert!((f.column(j).norm_squared() - l).abs() < 1e-8);
                            }
                        }
                        (false, Err(_)) => infeasible += 1,
                        (ok, built) => panic!(
                            "feasibility mismatch for {ell:?}: majorization {ok}, \
                             construction {:?}",
                            built.map(|_| ())
                        ),
                    }
                }
            }
        }
        assert!(feasible > 20, "only {feasible} feasible grid points");
        assert!(infeasible > 5, "only {infeasible} infeasible grid points");
    }

    #[test]
    fn generator_rejects_infeasible() {
        let t = LeverageTarget::new(vec![1.7, 0.3, 0.0, 0.0]).unwrap();
        let sigma = vec![2.0, 1.0, 0.5, 0.25];
        assert!(matches!(
            matrix_generator(&t, &sigma, 6, &RngState::new(0)),
            Err(CssError::Infeasible(_))
        ));
    }
}
