//! The resolution-limited agreement bound for a spherical target.
//!
//! A reconstructed sphere whose radius is off by the resolution limit
//! `r_err` can at best reach the Dice score of two concentric spheres of
//! radii `r` and `r + r_err`.

/// Theoretical maximum DSC-3D for concentric spheres of radius `r` and
/// `r + r_err`: `2r³ / (r³ + (r+r_err)³)`.
pub fn resolution_limited_dsc(r: f64, r_err: f64) -> f64 {
    assert!(r > 0.0, "radius must be positive");
    assert!(r + r_err > 0.0, "perturbed radius must stay positive");
    let r3 = r.powi(3);
    let s3 = (r + r_err).powi(3);
    2.0 * r3 / (r3 + s3)
}

/// Relative volume error implied by the same radius error:
/// `((r+r_err)³ − r³) / r³`.
pub fn resolution_limited_volume_error(r: f64, r_err: f64) -> f64 {
    assert!(r > 0.0, "radius must be positive");
    assert!(r + r_err > 0.0, "perturbed radius must stay positive");
    let r3 = r.powi(3);
    ((r + r_err).powi(3) - r3) / r3
}
