//! Eigenstep sequences: spectra of the partial Grams of a frame, and their
//! random generation inside the interlacing polytope.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{CssError, Result};
use crate::matrixgen::majorize::majorization_violation;

/// Interval endpoints closer than this collapse to their midpoint.
const INTERVAL_SLACK: f64 = 1e-12;
/// An interval emptier than this indicates an upstream bug.
const INTERVAL_EMPTY: f64 = 1e-9;

/// Inner eigensteps of a `k x d` frame: for each `r`, the decreasing
/// eigenvalues of the Gram of the first `r` columns (only the first
/// `min(r, k)` can be nonzero). The last row is the prescribed spectrum;
/// consecutive rows interlace; the r-th row sums to the first r column
/// norms.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenstepMatrix {
    pub k: usize,
    pub d: usize,
    rows: Vec<Vec<f64>>,
}

impl EigenstepMatrix {
    pub fn from_rows(k: usize, d: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != d {
            return Err(CssError::InvalidInput(format!(
                "expected {d} rows, got {}",
                rows.len()
            )));
        }
        for (r0, row) in rows.iter().enumerate() {
            if row.len() != (r0 + 1).min(k) {
                return Err(CssError::InvalidInput(format!(
                    "row {} must have {} entries, got {}",
                    r0 + 1,
                    (r0 + 1).min(k),
                    row.len()
                )));
            }
        }
        Ok(EigenstepMatrix { k, d, rows })
    }

    /// Inner row for the first `r` columns (1-based `r`).
    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r - 1]
    }

    /// The `k x d` outer array: column `r` holds the eigenvalues of the
    /// rank-capped partial Gram, padded with zeros.
    pub fn outer(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.k, self.d);
        for (r0, row) in self.rows.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                m[(i, r0)] = v;
            }
        }
        m
    }

    fn padded(&self, r0: usize) -> Vec<f64> {
        let mut v = self.rows[r0].clone();
        v.resize(self.k, 0.0);
        v
    }

    /// Check the polytope constraints against the prescribed column norms
    /// and spectrum: final row, interlacing of consecutive rows, and
    /// telescoping row sums, all within `tol`.
    pub fn validate(&self, ell: &[f64], sigma_sq: &[f64], tol: f64) -> Result<()> {
        if ell.len() != self.d || sigma_sq.len() != self.k {
            return Err(CssError::InvalidInput(
                "target lengths do not match the eigenstep shape".into(),
            ));
        }
        let mut spectrum = sigma_sq.to_vec();
        spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let last = self.padded(self.d - 1);
        for i in 0..self.k {
            if (last[i] - spectrum[i]).abs() > tol {
                return Err(CssError::InvariantViolation(format!(
                    "final row entry {i} is {} but the spectrum says {}",
                    last[i], spectrum[i]
                )));
            }
        }
        for r0 in 0..self.d - 1 {
            let u = self.padded(r0);
            let v = self.padded(r0 + 1);
            for i in 0..self.k {
                if u[i] > v[i] + tol {
                    return Err(CssError::InvariantViolation(format!(
                        "interlacing upper bound broken at row {}, entry {i}",
                        r0 + 1
                    )));
                }
                let below = if i + 1 < self.k { v[i + 1] } else { 0.0 };
                if u[i] < below - tol {
                    return Err(CssError::InvariantViolation(format!(
                        "interlacing lower bound broken at row {}, entry {i}",
                        r0 + 1
                    )));
                }
            }
        }
        let mut target = 0.0;
        for r0 in 0..self.d {
            target += ell[r0];
            let sum: f64 = self.rows[r0].iter().sum();
            if (sum - target).abs() > tol.max(1e-9 * target.abs()) {
                return Err(CssError::InvariantViolation(format!(
                    "row {} sums to {sum}, expected {target}",
                    r0 + 1
                )));
            }
        }
        Ok(())
    }
}

/// Eigensteps of an explicit frame: eigen-decompose each partial Gram.
pub fn compute_eigensteps(f: &DMatrix<f64>) -> EigenstepMatrix {
    let k = f.nrows();
    let d = f.ncols();
    let mut partial = DMatrix::<f64>::zeros(k, k);
    let mut rows = Vec::with_capacity(d);
    for r in 0..d {
        let col = f.column(r);
        partial += col * col.transpose();
        let eig = partial.clone().symmetric_eigenvalues();
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals.truncate((r + 1).min(k));
        rows.push(vals);
    }
    EigenstepMatrix { k, d, rows }
}

/// Draw a uniform point of each admissible interval while filling the
/// eigenstep array backward from the prescribed spectrum. The interval for
/// each entry combines the interlacing bounds with the trace-feasibility
/// and partial-sum bounds; a genuinely empty interval signals an infeasible
/// target and is an error, while float-level emptiness collapses to the
/// midpoint.
pub fn random_eigensteps<R: Rng + ?Sized>(
    ell: &[f64],
    sigma_sq: &[f64],
    rng: &mut R,
) -> Result<EigenstepMatrix> {
    let d = ell.len();
    let k = sigma_sq.len();
    if k == 0 || d < k {
        return Err(CssError::InvalidInput(format!(
            "need 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    if ell.windows(2).any(|w| w[0] < w[1] - 1e-12) {
        return Err(CssError::InvalidInput(
            "column norms must be sorted decreasingly".into(),
        ));
    }
    if let Some(reason) = majorization_violation(ell, sigma_sq) {
        return Err(CssError::Infeasible(reason));
    }

    let mut spectrum = sigma_sq.to_vec();
    spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); d];
    rows[d - 1] = spectrum;

    // 1-based accessor with zero padding beyond the stored entries
    let at = |row: &[f64], t: usize| -> f64 {
        if t >= 1 && t <= row.len() {
            row[t - 1]
        } else {
            0.0
        }
    };

    for r in (1..d).rev() {
        // build 1-based row r from row r + 1
        let prev = rows[r].clone();
        let m = r.min(k);
        let mut cur = vec![0.0; m];
        for i in (1..=m).rev() {
            let prev_tail: f64 = (i..=k).map(|t| at(&prev, t)).sum();
            let cur_tail: f64 = (i + 1..=k).map(|t| at(&cur, t)).sum();
            let lower = at(&prev, i + 1).max(prev_tail - cur_tail - ell[r]);

            let mut upper = at(&prev, i);
            for z in 1..=i {
                let ell_span: f64 = ell[z - 1..=r - 1].iter().sum();
                let prev_span: f64 = (z + 1..=i).map(|t| at(&prev, t)).sum();
                upper = upper.min(ell_span - prev_span - cur_tail);
            }

            let value = if lower > upper + INTERVAL_EMPTY {
                return Err(CssError::Infeasible(format!(
                    "empty eigenstep interval at row {r}, entry {i}: \
                     [{lower}, {upper}]"
                )));
            } else if upper - lower <= INTERVAL_SLACK {
                0.5 * (lower + upper)
            } else {
                lower + rng.random::<f64>() * (upper - lower)
            };
            cur[i - 1] = value.max(0.0);
        }
        rows[r - 1] = cur;
    }

    let steps = EigenstepMatrix { k, d, rows };
    steps.validate(ell, sigma_sq, 1e-9)?;
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;
    use approx::assert_relative_eq;

    #[test]
    fn square_case_has_no_freedom() {
        // d = k: the eigensteps are forced
        let ell = vec![2.0, 1.0];
        let sigma_sq = vec![2.0, 1.0];
        let mut rng = RngState::new(1).rng();
        let a = random_eigensteps(&ell, &sigma_sq, &mut rng).unwrap();
        let b = random_eigensteps(&ell, &sigma_sq, &mut rng).unwrap();
        assert_eq!(a, b);
        assert_relative_eq!(a.row(1)[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn row_sums_telescope() {
        let ell = vec![1.0, 1.0, 1.0, 1.0];
        let sigma_sq = vec![2.0, 2.0];
        let mut rng = RngState::new(5).rng();
        let steps = random_eigensteps(&ell, &sigma_sq, &mut rng).unwrap();
        for r in 1..=4 {
            let sum: f64 = steps.row(r).iter().sum();
            assert_relative_eq!(sum, r as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn generated_steps_pass_validator_and_corrupted_fail() {
        let ell = vec![0.9, 0.8, 0.7, 0.35, 0.25];
        let sigma_sq = vec![1.0, 1.0, 1.0];
        for seed in 0..20u64 {
            let mut rng = RngState::new(seed).rng();
            let steps = random_eigensteps(&ell, &sigma_sq, &mut rng).unwrap();
            steps.validate(&ell, &sigma_sq, 1e-9).unwrap();

            // corrupt one interior entry: the validator must reject
            let mut rows: Vec<Vec<f64>> = (1..=5).map(|r| steps.row(r).to_vec()).collect();
            rows[2][0] += 0.05;
            let bad = EigenstepMatrix::from_rows(3, 5, rows).unwrap();
            assert!(bad.validate(&ell, &sigma_sq, 1e-9).is_err(), "seed {seed}");
        }
    }

    #[test]
    fn infeasible_target_rejected() {
        let ell = vec![1.5, 0.5];
        let sigma_sq = vec![1.0, 1.0];
        let mut rng = RngState::new(2).rng();
        assert!(matches!(
            random_eigensteps(&ell, &sigma_sq, &mut rng),
            Err(CssError::Infeasible(_))
        ));
    }

    #[test]
    fn known_frame_eigensteps() {
        let f = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]);
        let steps = compute_eigensteps(&f);
        let outer = steps.outer();
        let expected = [[1.0, 1.0, 2.0, 2.0], [0.0, 1.0, 1.0, 2.0]];
        for i in 0..2 {
            for r in 0..4 {
                assert_eq!(outer[(i, r)], expected[i][r], "entry ({i}, {r})");
            }
        }
    }

    #[test]
    fn full_spectrum_at_last_column() {
        let mut rng = RngState::new(44).rng();
        let f = DMatrix::from_fn(3, 6, |_, _| {
            rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
        });
        let steps = compute_eigensteps(&f);
        let gram = f.transpose() * &f;
        let mut eig: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for i in 0..3 {
            assert_relative_eq!(steps.row(6)[i], eig[i], epsilon = 1e-9);
        }
    }
}
