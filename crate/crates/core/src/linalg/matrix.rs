//! Data matrices and their singular value decompositions.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use crate::error::{CssError, Result};

/// Relative cutoff under which singular values are truncated from the rank.
pub(crate) const RANK_CUTOFF: f64 = 1e-12;

/// Which matrix norm a residual or error is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    Frobenius,
    Spectral,
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::Frobenius => write!(f, "frobenius"),
            Norm::Spectral => write!(f, "spectral"),
        }
    }
}

/// A dense `N x d` data matrix with all entries finite, plus a lazily
/// computed, cached SVD. Immutable after construction, safe to share across
/// threads.
#[derive(Debug)]
pub struct DataMatrix {
    values: DMatrix<f64>,
    svd: OnceLock<SvdBundle>,
}

impl Clone for DataMatrix {
    fn clone(&self) -> Self {
        DataMatrix {
            values: self.values.clone(),
            svd: match self.svd.get() {
                Some(b) => {
                    let cell = OnceLock::new();
                    let _ = cell.set(b.clone());
                    cell
                }
                None => OnceLock::new(),
            },
        }
    }
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(CssError::InvalidInput("matrix must be at least 1x1".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(CssError::InvalidInput(
                "matrix has non-finite entries".into(),
            ));
        }
        Ok(DataMatrix {
            values,
            svd: OnceLock::new(),
        })
    }

    /// Build from row-major data.
    pub fn from_rows(n_rows: usize, n_cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(CssError::InvalidInput(format!(
                "expected {} entries, got {}",
                n_rows * n_cols,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n_rows, n_cols, data))
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    /// The cached SVD bundle, computed on first access.
    pub fn svd(&self) -> &SvdBundle {
        self.svd.get_or_init(|| {
            compute_svd_inner(&self.values).expect("finite matrix always has an SVD")
        })
    }

    /// The submatrix made of the given columns (duplicates kept).
    pub fn columns(&self, indices: &[usize]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n_rows(), indices.len());
        for (j, &idx) in indices.iter().enumerate() {
            out.set_column(j, &self.values.column(idx));
        }
        out
    }
}

/// Thin SVD `X = U diag(sigma) V^T`, truncated at the numerical rank.
///
/// `U` is `N x r`, `V` is `d x r` with orthonormal columns, and `sigma`
/// holds the `r` positive singular values in decreasing order. Singular
/// values below `1e-12 * sigma_1` are truncated. For reproducibility across
/// backends the sign of each right-singular vector is fixed so that its
/// first entry of magnitude above `1e-12` is nonnegative.
#[derive(Debug, Clone)]
pub struct SvdBundle {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
    pub rank: usize,
}

impl SvdBundle {
    /// First `k` columns of `V` (the top right-singular subspace basis).
    pub fn v_k(&self, k: usize) -> DMatrix<f64> {
        self.v.columns(0, k).into_owned()
    }

    /// Singular value `sigma_{i+1}`, zero beyond the rank.
    pub fn sigma_or_zero(&self, i: usize) -> f64 {
        if i < self.rank {
            self.sigma[i]
        } else {
            0.0
        }
    }

    /// Squared singular values padded with zeros to length `len`.
    pub fn sigma_sq_padded(&self, len: usize) -> Vec<f64> {
        (0..len).map(|i| self.sigma_or_zero(i).powi(2)).collect()
    }

    /// Reconstruct `U diag(sigma) V^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, mut col) in us.column_iter_mut().enumerate() {
            col *= self.sigma[j];
        }
        us * self.v.transpose()
    }
}

/// Compute the truncated SVD of a data matrix.
pub fn compute_svd(x: &DataMatrix) -> Result<SvdBundle> {
    compute_svd_inner(x.values())
}

fn compute_svd_inner(m: &DMatrix<f64>) -> Result<SvdBundle> {
    let svd = m.clone().svd(true, true);
    let u_full = svd
        .u
        .ok_or_else(|| CssError::InvalidInput("SVD failed to produce U".into()))?;
    let vt_full = svd
        .v_t
        .ok_or_else(|| CssError::InvalidInput("SVD failed to produce V^T".into()))?;
    let sigma = svd.singular_values;

    // Order triplets by decreasing singular value. nalgebra already sorts,
    // but the decreasing order is an invariant we rely on everywhere.
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap());

    let sigma_max = sigma[order[0]];
    let cutoff = RANK_CUTOFF * sigma_max;
    // a numerically zero matrix gets an empty bundle; every k >= 1 then
    // fails the rank preconditions downstream
    let rank = order.iter().filter(|&&i| sigma[i] > cutoff).count();

    let n = m.nrows();
    let d = m.ncols();
    let mut u = DMatrix::zeros(n, rank);
    let mut v = DMatrix::zeros(d, rank);
    let mut s = DVector::zeros(rank);
    for (j, &src) in order.iter().take(rank).enumerate() {
        s[j] = sigma[src];
        u.set_column(j, &u_full.column(src));
        v.set_column(j, &vt_full.row(src).transpose());
    }

    // Sign convention: first entry of each right-singular vector with
    // magnitude above 1e-12 is made nonnegative.
    for j in 0..rank {
        let flip = v
            .column(j)
            .iter()
            .find(|x| x.abs() > 1e-12)
            .is_some_and(|&x| x < 0.0);
        if flip {
            let vj = -v.column(j).into_owned();
            v.set_column(j, &vj);
            let uj = -u.column(j).into_owned();
            u.set_column(j, &uj);
        }
    }

    Ok(SvdBundle {
        u,
        sigma: s,
        v,
        rank,
    })
}
