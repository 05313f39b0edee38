//! Built-in toy spectra for controlled benchmark matrices (d = 20).

/// Dimension of the built-in toy spectra.
pub const TOY_DIM: usize = 20;

/// The singular values of a named toy spectrum, largest first.
///
/// `proj-k` is a projection-like cutoff (k large values, flat small tail);
/// `smooth-k` decays by decades before the same tail; `identity` is flat.
pub fn toy_spectrum(name: &str) -> Option<Vec<f64>> {
    let mut sigma = vec![0.1; TOY_DIM];
    match name {
        "proj-3" => {
            sigma[..3].fill(100.0);
        }
        "proj-5" => {
            sigma[..5].fill(100.0);
        }
        "smooth-3" => {
            sigma[..3].copy_from_slice(&[100.0, 10.0, 1.0]);
        }
        "smooth-5" => {
            sigma[..5].copy_from_slice(&[10000.0, 1000.0, 100.0, 10.0, 1.0]);
        }
        "identity" => {
            sigma.fill(1.0);
        }
        _ => return None,
    }
    Some(sigma)
}

/// Names accepted by [`toy_spectrum`].
pub fn toy_names() -> &'static [&'static str] {
    &["proj-3", "proj-5", "smooth-3", "smooth-5", "identity"]
}

/// The target rank a named spectrum was designed for (`None` for
/// `identity`, which has no distinguished cut).
pub fn toy_default_k(name: &str) -> Option<usize> {
    match name {
        "proj-3" | "smooth-3" => Some(3),
        "proj-5" | "smooth-5" => Some(5),
        _ => None,
    }
}
