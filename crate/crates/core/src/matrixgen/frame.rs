//! Frame reconstruction from eigensteps, and the deterministic
//! Givens-rotation constructor.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CssError, Result};
use crate::matrixgen::eigensteps::EigenstepMatrix;
use crate::matrixgen::majorize::majorization_violation;

/// Two prescribed eigenvalues closer than this are treated as one
/// eigenspace when matching root multisets.
const ROOT_MATCH_TOL: f64 = 1e-9;

/// Build a `k x d` frame whose partial Grams realize the given eigensteps
/// and whose column norms are `ell`.
///
/// Column `r + 1` is assembled per eigenspace of the accumulated Gram: the
/// squared projection onto the eigenspace of a prescribed eigenvalue is the
/// residue of the ratio of consecutive characteristic polynomials, obtained
/// by cancelling matched roots symbolically (multiset difference at
/// tolerance 1e-9), never by numerical limits. The first column and every
/// eigenspace block of dimension at least two are randomized (Haar
/// direction inside the block); one-dimensional blocks are deterministic.
pub fn reconstruct_frame<R: Rng + ?Sized>(
    steps: &EigenstepMatrix,
    ell: &[f64],
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let k = steps.k;
    let d = steps.d;
    if ell.len() != d {
        return Err(CssError::InvalidInput(format!(
            "expected {d} column norms, got {}",
            ell.len()
        )));
    }
    let outer = steps.outer();

    let mut f = DMatrix::<f64>::zeros(k, d);
    let first = random_unit_vector(k, rng) * ell[0].sqrt();
    f.set_column(0, &first);
    let mut gram = &first * first.transpose();

    for r in 0..d - 1 {
        let roots_cur: Vec<f64> = (0..k).map(|i| outer[(i, r)]).collect();
        let roots_next: Vec<f64> = (0..k).map(|i| outer[(i, r + 1)]).collect();

        // eigenvectors of the accumulated Gram, sorted to align with the
        // prescribed decreasing eigenvalues
        let eig = gram.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

        let mut col = DVector::<f64>::zeros(k);
        for cluster in cluster_ranges(&roots_cur) {
            let value = roots_cur[cluster.start];
            let mult_cur = cluster.len();
            let mult_next = roots_next
                .iter()
                .filter(|x| (*x - value).abs() <= ROOT_MATCH_TOL)
                .count();

            let target = if mult_next >= mult_cur {
                0.0
            } else if mult_next == mult_cur - 1 {
                let num = cancelled_product(&roots_next, value);
                let den = cancelled_product(&roots_cur, value);
                -num / den
            } else {
                return Err(CssError::Infeasible(format!(
                    "eigenvalue {value} loses multiplicity {mult_cur} -> {mult_next} \
                     between steps {} and {}",
                    r + 1,
                    r + 2
                )));
            };
            if target < -1e-10 {
                return Err(CssError::Infeasible(format!(
                    "negative squared projection {target} at step {}",
                    r + 2
                )));
            }
            let target = target.max(0.0);
            if target == 0.0 {
                continue;
            }

            let direction = if mult_cur == 1 {
                let mut v = eig.eigenvectors.column(order[cluster.start]).into_owned();
                if v.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
                    v = -v;
                }
                v
            } else {
                // Haar direction inside the eigenspace block
                let coeffs = random_unit_vector(mult_cur, rng);
                let mut v = DVector::<f64>::zeros(k);
                for (t, pos) in cluster.clone().enumerate() {
                    v += eig.eigenvectors.column(order[pos]) * coeffs[t];
                }
                v.normalize()
            };
            col += direction * target.sqrt();
        }

        f.set_column(r + 1, &col);
        gram += &col * col.transpose();
    }
    Ok(f)
}

fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Contiguous index ranges of equal values in a decreasing list.
fn cluster_ranges(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[start]).abs() > ROOT_MATCH_TOL {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Product of `(value - root)` over the roots not matching `value`.
fn cancelled_product(roots: &[f64], value: f64) -> f64 {
    roots
        .iter()
        .filter(|r| (*r - value).abs() > ROOT_MATCH_TOL)
        .map(|r| value - r)
        .product()
}

/// Deterministic frame with prescribed spectrum and column norms, built by
/// Givens rotations from the diagonal start `[Diag(sigma) | 0]`.
///
/// While some column norm mismatches its target, norm mass is rotated from
/// the first column in surplus into the first later column in deficit;
/// each rotation fixes at least one column exactly, so at most `d`
/// rotations run.
pub fn givens_frame(ell: &[f64], sigma: &[f64]) -> Result<DMatrix<f64>> {
    let k = sigma.len();
    let d = ell.len();
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
    let sigma_sq: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    if let Some(reason) = majorization_violation(ell, &sigma_sq) {
        return Err(CssError::Infeasible(reason));
    }

    let mut f = DMatrix::<f64>::zeros(k, d);
    for i in 0..k {
        f[(i, i)] = sigma[i];
    }
    let scale = sigma_sq.iter().cloned().fold(1.0, f64::max);
    let tol = 1e-10 * scale;

    for _round in 0..d * d {
        let norms: Vec<f64> = (0..d).map(|j| f.column(j).norm_squared()).collect();
        let first_mismatch = (0..d).find(|&j| (norms[j] - ell[j]).abs() > tol);
        let Some(i) = first_mismatch else {
            return Ok(f);
        };
        if norms[i] < ell[i] {
            return Err(CssError::Infeasible(format!(
                "no admissible rotation pair: first mismatched column {i} is in deficit"
            )));
        }
        let j = (i + 1..d)
            .find(|&j| norms[j] < ell[j] - tol)
            .ok_or_else(|| {
                CssError::Infeasible("no admissible rotation pair: no column in deficit".into())
            })?;

        let surplus = norms[i] - ell[i];
        let deficit = ell[j] - norms[j];
        // fix exactly whichever side is fully consumed by the transfer
        let (target_col, tau) = if surplus <= deficit {
            (ColSide::Left, ell[i])
        } else {
            (ColSide::Right, ell[j])
        };
        rotate_pair(&mut f, i, j, target_col, tau)?;
    }
    Err(CssError::Infeasible(
        "rotation loop failed to converge".into(),
    ))
}

enum ColSide {
    Left,
    Right,
}

/// Rotate columns `(i, j)` so that the chosen column ends with squared norm
/// `tau`. The target must lie between the two current squared norms.
fn rotate_pair(f: &mut DMatrix<f64>, i: usize, j: usize, side: ColSide, tau: f64) -> Result<()> {
    let a = f.column(i).norm_squared();
    let b = f.column(j).norm_squared();
    let gamma = f.column(i).dot(&f.column(j));

    // tan(theta) solves a quadratic; the coefficients depend on which
    // column must hit tau
    let (qa, qb, qc) = match side {
        ColSide::Left => (b - tau, 2.0 * gamma, a - tau),
        ColSide::Right => (a - tau, -2.0 * gamma, b - tau),
    };
    let t = solve_quadratic_smallest(qa, qb, qc).ok_or_else(|| {
        CssError::Infeasible(format!(
            "rotation target {tau} unreachable for norms ({a}, {b})"
        ))
    })?;
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let fi = f.column(i).into_owned();
    let fj = f.column(j).into_owned();
    f.set_column(i, &(&fi * c + &fj * s));
    f.set_column(j, &(&fj * c - &fi * s));
    Ok(())
}

/// Smallest-magnitude real root of `qa t^2 + qb t + qc = 0`.
fn solve_quadratic_smallest(qa: f64, qb: f64, qc: f64) -> Option<f64> {
    if qa.abs() < 1e-14 {
        if qb.abs() < 1e-14 {
            return if qc.abs() < 1e-12 { Some(0.0) } else { None };
        }
        return Some(-qc / qb);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = if qb >= 0.0 {
        -(qb + sq) / 2.0
    } else {
        -(qb - sq) / 2.0
    };
    let r1 = q / qa;
    let r2 = if q.abs() > 0.0 { qc / q } else { r1 };
    Some(if r1.abs() <= r2.abs() { r1 } else { r2 })
}
