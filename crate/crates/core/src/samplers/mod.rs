//! Column selectors, random and deterministic, behind one interface.

mod deterministic;
mod dpp;
mod multinomial;
mod qr;
mod volume;

pub use deterministic::{largest_leverage_select, threshold_select};
pub use dpp::{projection_dpp_sample, rejection_dpp_sample};
pub use multinomial::{length_square_sample, leverage_multinomial_sample, sample_categorical};
pub use qr::{double_phase_select, pivoted_qr_pivots, pivoted_qr_select};
pub use volume::{mixture_weights, volume_sampling_sample, SubsetDistribution, VolumeSampler};

use crate::error::{CssError, Result};
use crate::linalg::{k_leverage_scores, DataMatrix};
use crate::rng::RngState;
use crate::subsets::SubsetSelection;

/// Which selection algorithm to run, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectorKind {
    /// Fixed-size DPP on the top-k right-singular subspace.
    ProjectionDpp,
    /// Law proportional to the squared volume of the selected columns.
    VolumeSampling,
    /// `s` i.i.d. draws from the k-leverage-score distribution.
    LeverageMultinomial { s: usize },
    /// `s` i.i.d. draws proportional to squared column norms.
    LengthSquare { s: usize },
    /// The k columns with the largest k-leverage scores.
    LargestLeverage,
    /// Top-scoring columns until their scores exceed `theta` (requires
    /// `0 <= k - theta < 1`).
    ThresholdSelect { theta: f64 },
    /// First k pivots of QR with column pivoting.
    PivotedQr,
    /// Leverage-score preselection of `c` columns, then pivoted QR on the
    /// reduced matrix.
    DoublePhase { c: usize },
    /// Projection DPP conditioned on avoiding the low-leverage tail
    /// (`theta > 1`).
    RejectionDpp { theta: f64 },
}

impl SelectorKind {
    pub fn is_randomized(&self) -> bool {
        !matches!(
            self,
            SelectorKind::LargestLeverage
                | SelectorKind::ThresholdSelect { .. }
                | SelectorKind::PivotedQr
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            SelectorKind::ProjectionDpp => "dpp",
            SelectorKind::VolumeSampling => "vs",
            SelectorKind::LeverageMultinomial { .. } => "lev-mult",
            SelectorKind::LengthSquare { .. } => "length-sq",
            SelectorKind::LargestLeverage => "largest-lev",
            SelectorKind::ThresholdSelect { .. } => "threshold",
            SelectorKind::PivotedQr => "pivoted-qr",
            SelectorKind::DoublePhase { .. } => "double-phase",
            SelectorKind::RejectionDpp { .. } => "rejection-dpp",
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        match *self {
            SelectorKind::LeverageMultinomial { s } | SelectorKind::LengthSquare { s } => {
                if s < k {
                    return Err(CssError::InvalidInput(format!(
                        "multinomial sample size s = {s} must be at least k = {k}"
                    )));
                }
            }
            SelectorKind::DoublePhase { c } => {
                if c <= k {
                    return Err(CssError::InvalidInput(format!(
                        "double-phase preselection c = {c} must exceed k = {k}"
                    )));
                }
            }
            SelectorKind::RejectionDpp { theta } => {
                if theta <= 1.0 {
                    return Err(CssError::InvalidInput(format!(
                        "rejection theta = {theta} must exceed 1"
                    )));
                }
            }
            SelectorKind::ThresholdSelect { theta } => {
                let eps = k as f64 - theta;
                if !(0.0..1.0).contains(&eps) {
                    return Err(CssError::InvalidInput(format!(
                        "threshold theta = {theta} must satisfy 0 <= k - theta < 1"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Run a selector on a data matrix. Identical `(kind, k, rng)` always
/// produce identical selections.
pub fn select(
    x: &DataMatrix,
    k: usize,
    kind: SelectorKind,
    rng: &RngState,
) -> Result<SubsetSelection> {
    kind.validate(k)?;
    let mut gen = rng.rng();
    match kind {
        SelectorKind::ProjectionDpp => {
            let vk = x.svd_at_least(k)?.v_k(k);
            projection_dpp_sample(&vk, &mut gen)
        }
        SelectorKind::VolumeSampling => volume_sampling_sample(x, k, &mut gen),
        SelectorKind::LeverageMultinomial { s } => {
            let profile = k_leverage_scores(x.svd_at_least(k)?, k)?;
            leverage_multinomial_sample(&profile, s, &mut gen)
        }
        SelectorKind::LengthSquare { s } => length_square_sample(x, s, &mut gen),
        SelectorKind::LargestLeverage => {
            let profile = k_leverage_scores(x.svd_at_least(k)?, k)?;
            largest_leverage_select(&profile, k)
        }
        SelectorKind::ThresholdSelect { theta } => {
            let profile = k_leverage_scores(x.svd_at_least(k)?, k)?;
            threshold_select(&profile, theta)
        }
        SelectorKind::PivotedQr => pivoted_qr_select(x, k),
        SelectorKind::DoublePhase { c } => double_phase_select(x, k, c, &mut gen),
        SelectorKind::RejectionDpp { theta } => {
            let svd = x.svd_at_least(k)?;
            let profile = k_leverage_scores(svd, k)?;
            let vk = svd.v_k(k);
            rejection_dpp_sample(&vk, &profile, theta, &mut gen).map(|(s, _)| s)
        }
    }
}

impl DataMatrix {
    fn svd_at_least(&self, k: usize) -> Result<&crate::linalg::SvdBundle> {
        let svd = self.svd();
        if k > svd.rank {
            return Err(CssError::Rank(format!(
                "k = {k} exceeds numerical rank {}",
                svd.rank
            )));
        }
        Ok(svd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn determinism_per_state() {
        let mut rng = RngState::new(3).rng();
        let x = DataMatrix::new(DMatrix::from_fn(12, 8, |_, _| {
            rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
        }))
        .unwrap();
        let kinds = [
            SelectorKind::ProjectionDpp,
            SelectorKind::VolumeSampling,
            SelectorKind::LeverageMultinomial { s: 5 },
            SelectorKind::LengthSquare { s: 5 },
            SelectorKind::DoublePhase { c: 6 },
            SelectorKind::RejectionDpp { theta: 2.0 },
        ];
        for kind in kinds {
            let state = RngState::new(17).substream(4);
            let a = select(&x, 3, kind, &state).unwrap();
            let b = select(&x, 3, kind, &state).unwrap();
            assert_eq!(a, b, "{kind:?} not deterministic");
        }
    }

    #[test]
    fn fixed_size_selectors_return_k_distinct() {
        let mut rng = RngState::new(8).rng();
        let x = DataMatrix::new(DMatrix::from_fn(10, 7, |_, _| {
            rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
        }))
        .unwrap();
        let state = RngState::new(1);
        for kind in [
            SelectorKind::ProjectionDpp,
            SelectorKind::VolumeSampling,
            SelectorKind::LargestLeverage,
            SelectorKind::PivotedQr,
            SelectorKind::DoublePhase { c: 6 },
            SelectorKind::RejectionDpp { theta: 1.5 },
        ] {
            let s = select(&x, 3, kind, &state).unwrap();
            assert_eq!(s.len(), 3);
            assert!(!s.allow_duplicates());
        }
        let s = select(&x, 3, SelectorKind::LeverageMultinomial { s: 6 }, &state).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.allow_duplicates());
    }

    #[test]
    fn parameter_validation() {
        let x = DataMatrix::new(DMatrix::identity(4, 4)).unwrap();
        let state = RngState::new(0);
        assert!(select(&x, 3, SelectorKind::LeverageMultinomial { s: 2 }, &state).is_err());
        assert!(select(&x, 3, SelectorKind::DoublePhase { c: 3 }, &state).is_err());
        assert!(select(&x, 3, SelectorKind::RejectionDpp { theta: 1.0 }, &state).is_err());
        assert!(select(&x, 3, SelectorKind::ThresholdSelect { theta: 1.5 }, &state).is_err());
    }
}
