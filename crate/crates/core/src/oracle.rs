//! Exhaustive-enumeration ground truth for subset laws, expectations and
//! avoiding probabilities at desk scale.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{CssError, Result};
use crate::linalg::{
    effective_sparsity, elementary_symmetric, frobenius_projection_residual, k_leverage_scores,
    DataMatrix, KLeverageProfile, Norm,
};
use crate::subsets::{binomial, subset_at, SubsetSelection};

/// Largest number of subsets enumerated exhaustively; keeps full sweeps
/// under a minute.
pub const ENUMERATION_CAPACITY: u64 = 2_000_000;

/// Fixed work-chunk size: parallel reductions sum per-chunk in index order,
/// so results do not depend on the thread count.
const CHUNK: usize = 4096;

/// Which subset law to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    /// `P(S)` is the squared determinant of the selected row block of the
    /// top-k right-singular basis.
    ProjectionDpp,
    /// `P(S)` is proportional to the squared volume of the selected
    /// columns.
    VolumeSampling,
}

/// An exact, normalized law over the k-subsets of `{0, .., d-1}`, indexed
/// in lexicographic order.
#[derive(Debug, Clone)]
pub struct SubsetLaw {
    pub k: usize,
    pub d: usize,
    weights: Vec<f64>,
}

impl SubsetLaw {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Probability of the subset at a lexicographic position.
    pub fn probability(&self, position: usize) -> f64 {
        self.weights[position]
    }

    /// The subset at a lexicographic position.
    pub fn subset(&self, position: usize) -> Vec<usize> {
        subset_at(self.d, self.k, position as u64)
    }

    /// Total variation distance to another law on the same support.
    pub fn total_variation(&self, other: &SubsetLaw) -> f64 {
        0.5 * self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }

    /// Empirical law from counts aligned with the lexicographic order.
    pub fn from_counts(k: usize, d: usize, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(CssError::InvalidInput("no counts".into()));
        }
        Ok(SubsetLaw {
            k,
            d,
            weights: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        })
    }

    /// Lexicographic position of a sorted subset.
    pub fn position_of(&self, subset: &[usize]) -> usize {
        let mut pos = 0u64;
        let mut prev = 0usize;
        for (slot, &x) in subset.iter().enumerate() {
            for c in prev..x {
                pos += binomial(self.d - c - 1, self.k - slot - 1);
            }
            prev = x + 1;
        }
        pos as usize
    }
}

fn check_capacity(d: usize, k: usize) -> Result<u64> {
    let count = binomial(d, k);
    if count == 0 {
        return Err(CssError::Rank(format!(
            "no subsets of size {k} in {d} columns"
        )));
    }
    if count > ENUMERATION_CAPACITY {
        return Err(CssError::Capacity(format!(
            "C({d}, {k}) = {count} subsets exceed the enumeration capacity {ENUMERATION_CAPACITY}"
        )));
    }
    Ok(count)
}

fn map_subsets<F: Fn(&[usize]) -> f64 + Sync>(d: usize, k: usize, count: u64, f: F) -> Vec<f64> {
    let positions: Vec<u64> = (0..count).collect();
    positions
        .par_chunks(CHUNK)
        .flat_map_iter(|chunk| {
            chunk
                .iter()
                .map(|&pos| f(&subset_at(d, k, pos)))
                .collect::<Vec<f64>>()
        })
        .collect()
}

/// Sum in fixed chunk order, independent of the thread count.
fn chunked_sum(values: &[f64]) -> f64 {
    values.chunks(CHUNK).map(|c| c.iter().sum::<f64>()).sum()
}

/// Enumerate the exact law of a selector over all k-subsets.
///
/// The DPP weights must sum to one on their own (checked to 1e-10); the
/// volume-sampling normalizer is checked against `e_k` of the squared
/// spectrum to 1e-8 relative before normalizing.
pub fn enumerate_law(x: &DataMatrix, k: usize, kind: LawKind) -> Result<SubsetLaw> {
    let d = x.n_cols();
    let count = check_capacity(d, k)?;
    let svd = x.svd();
    if k > svd.rank {
        return Err(CssError::Rank(format!("k = {k} exceeds rank {}", svd.rank)));
    }

    let mut weights = match kind {
        LawKind::ProjectionDpp => {
            let vk = svd.v_k(k);
            map_subsets(d, k, count, |s| {
                let mut block = DMatrix::zeros(k, k);
                for (row, &j) in s.iter().enumerate() {
                    for c in 0..k {
                        block[(row, c)] = vk[(j, c)];
                    }
                }
                let det = block.determinant();
                det * det
            })
        }
        LawKind::VolumeSampling => {
            // squared volumes via singular values of the scaled right
            // factor; the Gram determinant squares the conditioning and
            // loses digits on spectra spanning many decades
            let r = svd.rank;
            let mut scaled = DMatrix::zeros(r, d);
            for i in 0..r {
                for j in 0..d {
                    scaled[(i, j)] = svd.sigma[i] * svd.v[(j, i)];
                }
            }
            map_subsets(d, k, count, |s| {
                let mut block = DMatrix::zeros(r, k);
                for (c, &j) in s.iter().enumerate() {
                    block.set_column(c, &scaled.column(j));
                }
                block
                    .svd(false, false)
                    .singular_values
                    .iter()
                    .map(|x| x * x)
                    .product()
            })
        }
    };

    let total = chunked_sum(&weights);
    match kind {
        LawKind::ProjectionDpp => {
            if (total - 1.0).abs() > 1e-10 {
                return Err(CssError::Inconsistency(format!(
                    "projection-DPP weights sum to {total}, expected 1"
                )));
            }
        }
        LawKind::VolumeSampling => {
            let sigma_sq: Vec<f64> = svd.sigma.iter().map(|s| s * s).collect();
            let expected = elementary_symmetric(&sigma_sq, k);
            if (total - expected).abs() > 1e-8 * expected.abs().max(1e-300) {
                return Err(CssError::Inconsistency(format!(
                    "volume-sampling normalizer {total} disagrees with e_k = {expected}"
                )));
            }
        }
    }
    for w in &mut weights {
        *w /= total;
    }
    Ok(SubsetLaw { k, d, weights })
}

/// Squared projection residuals for every k-subset, in lexicographic
/// order.
pub fn enumerate_residuals_sq(x: &DataMatrix, k: usize, norm: Norm) -> Result<Vec<f64>> {
    let d = x.n_cols();
    let count = check_capacity(d, k)?;
    Ok(map_subsets(d, k, count, |s| {
        let sel = SubsetSelection::distinct(s.to_vec(), d).expect("enumerated subset is valid");
        let r =
            frobenius_projection_residual(x, &sel, norm).expect("residual of a nonempty selection");
        r * r
    }))
}

/// Exact expected squared residual under an enumerated law.
pub fn exact_expected_error(x: &DataMatrix, k: usize, kind: LawKind, norm: Norm) -> Result<f64> {
    let law = enumerate_law(x, k, kind)?;
    let residuals = enumerate_residuals_sq(x, k, norm)?;
    Ok(expected_under(&law, &residuals))
}

/// Expectation of per-subset values under a law (fixed-order reduction).
pub fn expected_under(law: &SubsetLaw, values: &[f64]) -> f64 {
    let products: Vec<f64> = law.weights.iter().zip(values).map(|(w, v)| w * v).collect();
    chunked_sum(&products)
}

/// Mask of subsets avoiding every column ranked beyond `p_eff(theta)` in
/// decreasing score order.
fn avoiding_mask(
    law_d: usize,
    law_k: usize,
    profile: &KLeverageProfile,
    theta: f64,
) -> Result<Vec<bool>> {
    let p_eff = effective_sparsity(profile, theta)?;
    let order = profile.order_by_score();
    let mut forbidden = vec![false; law_d];
    for &j in &order[p_eff..] {
        forbidden[j] = true;
    }
    let count = binomial(law_d, law_k);
    Ok((0..count)
        .map(|pos| subset_at(law_d, law_k, pos).iter().all(|&j| !forbidden[j]))
        .collect())
}

/// Exact probability that a projection-DPP sample avoids the forbidden
/// tail, computed two ways and cross-checked to 1e-8: by summing the law
/// over avoiding subsets, and as `e_k` of the eigenvalues of the kernel
/// restricted to the kept rows.
pub fn exact_avoiding_probability(
    vk: &DMatrix<f64>,
    profile: &KLeverageProfile,
    theta: f64,
) -> Result<f64> {
    let d = vk.nrows();
    let k = vk.ncols();
    let count = check_capacity(d, k)?;

    let p_eff = effective_sparsity(profile, theta)?;
    let order = profile.order_by_score();
    let kept = &order[..p_eff];

    // route (a): sum of squared determinants over avoiding subsets
    let mut forbidden = vec![false; d];
    for &j in &order[p_eff..] {
        forbidden[j] = true;
    }
    let weights = map_subsets(d, k, count, |s| {
        if s.iter().any(|&j| forbidden[j]) {
            return 0.0;
        }
        let mut block = DMatrix::zeros(k, k);
        for (row, &j) in s.iter().enumerate() {
            for c in 0..k {
                block[(row, c)] = vk[(j, c)];
            }
        }
        let det = block.determinant();
        det * det
    });
    let by_enumeration = chunked_sum(&weights);

    // route (b): e_k of the spectrum of the restricted kernel
    let mut restricted = DMatrix::zeros(kept.len(), k);
    for (r, &j) in kept.iter().enumerate() {
        for c in 0..k {
            restricted[(r, c)] = vk[(j, c)];
        }
    }
    let kernel = &restricted * restricted.transpose();
    let eigs: Vec<f64> = kernel.symmetric_eigenvalues().iter().copied().collect();
    let by_spectrum = elementary_symmetric(&eigs, k);

    if (by_enumeration - by_spectrum).abs() > 1e-8 {
        return Err(CssError::Inconsistency(format!(
            "avoiding probability routes disagree: {by_enumeration} vs {by_spectrum}"
        )));
    }
    Ok(by_enumeration)
}

/// Exact expected squared residual of the projection DPP conditioned on
/// avoiding the forbidden tail: the unconditional law restricted to
/// avoiding subsets and renormalized.
pub fn exact_conditional_expected_error(
    x: &DataMatrix,
    k: usize,
    theta: f64,
    norm: Norm,
) -> Result<f64> {
    let law = enumerate_law(x, k, LawKind::ProjectionDpp)?;
    let residuals = enumerate_residuals_sq(x, k, norm)?;
    let profile = k_leverage_scores(x.svd(), k)?;
    conditional_expectation(&law, &residuals, &profile, theta)
}

/// Conditional expectation of per-subset values given the avoiding event,
/// from a precomputed law and value table.
pub fn conditional_expectation(
    law: &SubsetLaw,
    values: &[f64],
    profile: &KLeverageProfile,
    theta: f64,
) -> Result<f64> {
    let mask = avoiding_mask(law.d, law.k, profile, theta)?;
    let masses: Vec<f64> = law
        .weights
        .iter()
        .zip(&mask)
        .map(|(w, &keep)| if keep { *w } else { 0.0 })
        .collect();
    let mass = chunked_sum(&masses);
    if mass <= 1e-300 {
        return Err(CssError::InvariantViolation(
            "the avoiding event has no probability mass".into(),
        ));
    }
    let weighted: Vec<f64> = masses.iter().zip(values).map(|(w, v)| w * v).collect();
    Ok(chunked_sum(&weighted) / mass)
}
