//! Deterministic linear-algebra substrate: SVD bundles, leverage scores,
//! elementary symmetric polynomials, spanned volumes, projection residuals,
//! and principal angles.

mod angles;
mod leverage;
mod matrix;
mod projection;
mod sympoly;

pub use angles::{principal_angles, tangent_trace};
pub use leverage::{effective_sparsity, flatness_beta, k_leverage_scores, KLeverageProfile};
pub use matrix::{compute_svd, DataMatrix, Norm, SvdBundle};
pub use projection::{
    best_rank_k_error, frobenius_projection_residual, pseudo_inverse, rank_restricted_residual,
    PINV_CUTOFF,
};
pub use sympoly::{elementary_symmetric, elementary_symmetric_all, spanned_volume};
