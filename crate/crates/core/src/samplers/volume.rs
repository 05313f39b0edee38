//! Volume sampling as a mixture of projection DPPs over eigen-subsets.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{CssError, Result};
use crate::linalg::DataMatrix;
use crate::samplers::dpp::projection_dpp_sample;
use crate::subsets::{binomial, subset_at, KSubsets, SubsetSelection};

/// Largest supported rank for the exact mixture enumeration.
pub const MIXTURE_MAX_RANK: usize = 30;
/// Largest number of mixture components enumerated exactly.
pub const MIXTURE_MAX_COMPONENTS: u64 = 2_000_000;

/// A normalized distribution over the k-subsets of `{0, .., r-1}`, stored
/// as cumulative weights in lexicographic subset order.
#[derive(Debug, Clone)]
pub struct SubsetDistribution {
    pub r: usize,
    pub k: usize,
    cumulative: Vec<f64>,
}

impl SubsetDistribution {
    /// Probability of the subset at a lexicographic position.
    pub fn weight(&self, position: usize) -> f64 {
        let prev = if position == 0 {
            0.0
        } else {
            self.cumulative[position - 1]
        };
        self.cumulative[position] - prev
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    /// Draw a subset by inverse CDF.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let u: f64 = rng.random();
        let pos = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(i) => (i + 1).min(self.cumulative.len() - 1),
            Err(i) => i.min(self.cumulative.len() - 1),
        };
        subset_at(self.r, self.k, pos as u64)
    }
}

/// Mixture weights over k-subsets of eigenvalue indices: the subset `T`
/// gets mass proportional to the product of `sigma_i^2` over `i` in `T`.
/// Enumerated exactly, which caps `r` at 30 and the component count at
/// 2e6; beyond that the caller must refuse rather than approximate.
pub fn mixture_weights(sigma: &[f64], k: usize) -> Result<SubsetDistribution> {
    let r = sigma.len();
    if k == 0 || k > r {
        return Err(CssError::Rank(format!("k = {k} out of range for rank {r}")));
    }
    if r > MIXTURE_MAX_RANK || binomial(r, k) > MIXTURE_MAX_COMPONENTS {
        return Err(CssError::Capacity(format!(
            "mixture enumeration over C({r}, {k}) subsets exceeds capacity \
             (rank <= {MIXTURE_MAX_RANK}, components <= {MIXTURE_MAX_COMPONENTS})"
        )));
    }
    // log-space products guard against under/overflow for spread spectra
    let log_sq: Vec<f64> = sigma.iter().map(|s| (s * s).ln()).collect();
    let mut log_weights = Vec::with_capacity(binomial(r, k) as usize);
    let mut max_log = f64::NEG_INFINITY;
    for t in KSubsets::new(r, k) {
        let lw: f64 = t.iter().map(|&i| log_sq[i]).sum();
        max_log = max_log.max(lw);
        log_weights.push(lw);
    }
    if !max_log.is_finite() {
        return Err(CssError::Rank("all mixture weights vanish".into()));
    }
    let mut cumulative = Vec::with_capacity(log_weights.len());
    let mut acc = 0.0;
    for lw in &log_weights {
        acc += (lw - max_log).exp();
        cumulative.push(acc);
    }
    let total = acc;
    for c in &mut cumulative {
        *c /= total;
    }
    if let Some(last) = cumulative.last_mut() {
        *last = 1.0;
    }
    Ok(SubsetDistribution { r, k, cumulative })
}

/// Volume sampling with the mixture and spectral data precomputed, for
/// repeated draws from the same matrix.
pub struct VolumeSampler<'a> {
    x: &'a DataMatrix,
    k: usize,
    mixture: SubsetDistribution,
}

impl<'a> VolumeSampler<'a> {
    pub fn new(x: &'a DataMatrix, k: usize) -> Result<Self> {
        let svd = x.svd();
        if k > svd.rank {
            return Err(CssError::Rank(format!("k = {k} exceeds rank {}", svd.rank)));
        }
        let mixture = mixture_weights(svd.sigma.as_slice(), k)?;
        Ok(VolumeSampler { x, k, mixture })
    }

    /// One draw: pick an eigen-subset from the mixture, then run the
    /// projection-DPP chain rule on the corresponding right-singular
    /// columns.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SubsetSelection> {
        let t = self.mixture.sample(rng);
        let svd = self.x.svd();
        let mut vt = DMatrix::zeros(svd.v.nrows(), self.k);
        for (j, &i) in t.iter().enumerate() {
            vt.set_column(j, &svd.v.column(i));
        }
        projection_dpp_sample(&vt, rng)
    }
}

/// Sample a subset of `k` columns with probability proportional to the
/// squared volume `det(X[:, S]^T X[:, S])`.
pub fn volume_sampling_sample<R: Rng + ?Sized>(
    x: &DataMatrix,
    k: usize,
    rng: &mut R,
) -> Result<SubsetSelection> {
    VolumeSampler::new(x, k)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    #[test]
    fn equal_spectrum_uniform_weights() {
        let dist = mixture_weights(&[2.0, 2.0, 2.0, 2.0], 2).unwrap();
        for pos in 0..dist.len() {
            assert_relative_eq!(dist.weight(pos), 1.0 / 6.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_eigenvalue_kills_its_subsets() {
        // sigma = (2, 1, 0), k = 2: all mass on {0, 1}
        let dist = mixture_weights(&[2.0, 1.0, 0.0], 2).unwrap();
        assert_relative_eq!(dist.weight(0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(dist.weight(1), 0.0, epsilon = 1e-12);
        assert_relative_eq!(dist.weight(2), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pair_products() {
        // sigma^2 = (4, 2, 1), k = 2: weights prop to (8, 4, 2)
        let dist = mixture_weights(&[2.0, 2f64.sqrt(), 1.0], 2).unwrap();
        assert_relative_eq!(dist.weight(0), 8.0 / 14.0, epsilon = 1e-12);
        assert_relative_eq!(dist.weight(1), 4.0 / 14.0, epsilon = 1e-12);
        assert_relative_eq!(dist.weight(2), 2.0 / 14.0, epsilon = 1e-12);
    }

    #[test]
    fn capacity_guard() {
        let sigma = vec![1.0; 31];
        assert!(matches!(
            mixture_weights(&sigma, 3),
            Err(crate::error::CssError::Capacity(_))
        ));
    }

    #[test]
    fn identity_two_columns_uniform() {
        let x = DataMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let mut rng = RngState::new(7).rng();
        let n = 50_000;
        let mut count0 = 0;
        for _ in 0..n {
            if volume_sampling_sample(&x, 1, &mut rng).unwrap().indices()[0] == 0 {
                count0 += 1;
            }
        }
        let freq = count0 as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn diagonal_two_columns_law() {
        // X = diag(2, 1), k = 1: P({0}) = 4/5
        let x =
            DataMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]))).unwrap();
        let mut rng = RngState::new(13).rng();
        let n = 100_000;
        let mut count0 = 0;
        for _ in 0..n {
            if volume_sampling_sample(&x, 1, &mut rng).unwrap().indices()[0] == 0 {
                count0 += 1;
            }
        }
        let freq = count0 as f64 / n as f64;
        assert!((freq - 0.8).abs() < 3.0 * (0.8f64 * 0.2 / n as f64).sqrt() + 1e-4);
    }
}
