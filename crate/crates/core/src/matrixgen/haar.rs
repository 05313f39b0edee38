//! Haar-distributed orthogonal matrices and orthonormal completions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CssError, Result};
use crate::rng::RngState;

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix: QR of an i.i.d. Gaussian matrix with
/// the R-diagonal sign correction.
pub fn haar_orthogonal(n: usize, state: &RngState) -> DMatrix<f64> {
    let mut rng = state.rng();
    haar_stiefel_with(n, n, &mut rng)
}

/// Haar measure on the Stiefel slice: `n x d` with orthonormal columns,
/// `n >= d`.
pub fn haar_stiefel(n_rows: usize, n_cols: usize, state: &RngState) -> Result<DMatrix<f64>> {
    if n_cols > n_rows {
        return Err(CssError::InvalidInput(format!(
            "Stiefel frame needs n_rows >= n_cols, got {n_rows} x {n_cols}"
        )));
    }
    let mut rng = state.rng();
    Ok(haar_stiefel_with(n_rows, n_cols, &mut rng))
}

pub(crate) fn haar_stiefel_with<R: Rng + ?Sized>(
    n_rows: usize,
    n_cols: usize,
    rng: &mut R,
) -> DMatrix<f64> {
    let g = gaussian_matrix(n_rows, n_cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n_cols {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j).into_owned();
            q.set_column(j, &col);
        }
    }
    q
}

/// Extend a `d x k` matrix with orthonormal columns to a full `d x d`
/// orthogonal matrix by Gram-Schmidt on i.i.d. Gaussian vectors, with a
/// re-orthogonalization pass.
pub fn complete_orthonormal_basis<R: Rng + ?Sized>(
    vk: &DMatrix<f64>,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let d = vk.nrows();
    let k = vk.ncols();
    if k > d {
        return Err(CssError::InvalidInput("more columns than rows".into()));
    }
    let mut cols: Vec<DVector<f64>> = (0..k).map(|j| vk.column(j).into_owned()).collect();
    let mut attempts = 0;
    while cols.len() < d {
        let mut v: DVector<f64> = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        for pass in 0..2 {
            let _ = pass;
            for q in &cols {
                let proj = q.dot(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / norm);
        } else {
            attempts += 1;
            if attempts > 50 {
                return Err(CssError::InvariantViolation(
                    "could not complete the orthonormal basis".into(),
                ));
            }
        }
    }
    let mut out = DMatrix::zeros(d, d);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    Ok(out)
}
