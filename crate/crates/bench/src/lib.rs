//! Shared fixtures for the criterion benchmarks.

use cssdpp_core::matrixgen::{dirichlet_leverage_profile, matrix_generator};
use cssdpp_core::toy::toy_spectrum;
use cssdpp_core::{DataMatrix, RngState};

/// A 100 x 20 matrix with the smooth-3 spectrum and a sparse profile.
pub fn toy_matrix(seed: u64) -> DataMatrix {
    let state = RngState::new(seed);
    let mut rng = state.rng();
    let ell = dirichlet_leverage_profile(3, 10, 20, &mut rng).unwrap();
    matrix_generator(
        &ell,
        &toy_spectrum("smooth-3").unwrap(),
        100,
        &state.substream(1),
    )
    .unwrap()
}
