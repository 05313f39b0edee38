//! Principal angles between subspaces and the associated tangent trace.

use nalgebra::DMatrix;

use crate::error::{CssError, Result};
use crate::subsets::SubsetSelection;

fn check_orthonormal(m: &DMatrix<f64>, name: &str) -> Result<()> {
    let gram = m.transpose() * m;
    let dev = (gram - DMatrix::identity(m.ncols(), m.ncols())).norm();
    if dev > 1e-8 {
        return Err(CssError::InvalidInput(format!(
            "{name} columns are not orthonormal (deviation {dev:.2e})"
        )));
    }
    Ok(())
}

/// Principal angles between the column spans of `p` and `q`, both with
/// orthonormal columns and `q` no wider than `p`.
///
/// `cos(theta_i) = sigma_i(Q^T P)`; cosines are clipped to `[0, 1]` before
/// the arccos. Angles are returned increasing in `[0, pi/2]`.
pub fn principal_angles(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<Vec<f64>> {
    if q.ncols() > p.ncols() {
        return Err(CssError::InvalidInput(format!(
            "second subspace ({} cols) is wider than the first ({} cols)",
            q.ncols(),
            p.ncols()
        )));
    }
    if p.nrows() != q.nrows() {
        return Err(CssError::InvalidInput("ambient dimensions differ".into()));
    }
    check_orthonormal(p, "first basis")?;
    check_orthonormal(q, "second basis")?;
    let product = q.transpose() * p;
    let svd = product.svd(false, false);
    let mut cosines: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect();
    cosines.sort_by(|a, b| b.partial_cmp(a).unwrap());
    cosines.truncate(q.ncols());
    Ok(cosines.into_iter().map(|c| c.acos()).collect())
}

/// Trace of `Z_S Z_S^T` with `Z_S = V_tail^T S (V_k^T S)^{-1}`, where `V` is
/// a `d x d` orthogonal matrix split after column `k` and `S` selects `k`
/// canonical directions. Equals the sum of squared tangents of the
/// principal angles between the selected coordinate subspace and the span
/// of the first `k` columns of `V`.
pub fn tangent_trace(v: &DMatrix<f64>, selection: &SubsetSelection, k: usize) -> Result<f64> {
    let d = v.nrows();
    if v.ncols() != d {
        return Err(CssError::InvalidInput("V must be square".into()));
    }
    check_orthonormal(v, "V")?;
    let idx = selection.indices();
    if idx.len() != k {
        return Err(CssError::InvalidInput(format!(
            "selection has {} indices, expected k = {k}",
            idx.len()
        )));
    }

    // V_k^T S is the k x k submatrix of V with rows in S, transposed.
    let mut vks = DMatrix::zeros(k, k);
    let mut vtails = DMatrix::zeros(d - k, k);
    for (col, &j) in idx.iter().enumerate() {
        for i in 0..k {
            vks[(i, col)] = v[(j, i)];
        }
        for i in k..d {
            vtails[(i - k, col)] = v[(j, i)];
        }
    }
    let det = vks.clone().lu().determinant();
    if det.abs() <= 1e-12 {
        return Err(CssError::Singular(format!(
            "V_k^T S is singular (|det| = {:.2e})",
            det.abs()
        )));
    }
    let inv = vks
        .try_inverse()
        .ok_or_else(|| CssError::Singular("V_k^T S is not invertible".into()))?;
    let z = vtails * inv;
    Ok(z.norm_squared())
}
