//! Parametric least-squares fitting of sphere, ellipsoid, cylinder, and
//! equilateral-prism models to surface point clouds.
//!
//! Every fitter follows the same pattern: a closed-form or covariance
//! initialization, then Gauss-Newton refinement of exact point-to-surface
//! distances with a backtracking line search (Nelder-Mead fallback when
//! the normal equations are ill-conditioned). Fits are deterministic for
//! fixed inputs.

mod cylinder;
mod ellipsoid;
mod optim;
mod prism;
mod samples;
mod sphere;

pub use cylinder::fit_cylinder;
pub use ellipsoid::fit_ellipsoid;
pub use optim::{least_squares, LeastSquaresOptions, OptimOutcome};
pub use prism::fit_triprism;
pub use samples::sample_shape_surface;
pub use sphere::fit_sphere;

use crate::phantom::ShapeSpec;
use nalgebra::{Matrix3, Point3, Vector3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShapeFitError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
}

/// Outcome of a parametric shape fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Fitted shape parameters.
    pub shape: ShapeSpec,
    /// RMS point-to-surface distance at the fitted parameters, mm.
    pub rms_residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// RMS after each accepted optimizer iteration (never increasing).
    pub residual_history: Vec<f64>,
}

pub(crate) fn validate_points(
    points: &[Point3<f64>],
    min_count: usize,
) -> Result<(), ShapeFitError> {
    if points.len() < min_count {
        return Err(ShapeFitError::InvalidInput(format!(
            "need at least {min_count} points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|p| !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()))
    {
        return Err(ShapeFitError::InvalidInput(
            "non-finite point coordinates".into(),
        ));
    }
    Ok(())
}

/// Centroid, covariance eigenvectors (descending eigenvalue, right-handed)
/// and eigenvalues of a point set.
pub(crate) fn covariance_frame(
    points: &[Point3<f64>],
) -> (Point3<f64>, [Vector3<f64>; 3], [f64; 3]) {
    let mut mean = Vector3::zeros();
    for p in points {
        mean += p.coords;
    }
    mean /= points.len() as f64;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p.coords - mean;
        cov += d * d.transpose();
    }
    cov /= points.len() as f64;
    let eigen = cov.symmetric_eigen();
    let mut pairs: Vec<(f64, Vector3<f64>)> = (0..3)
        .map(|i| {
            (
                eigen.eigenvalues[i].max(0.0),
                eigen.eigenvectors.column(i).into_owned(),
            )
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut axes = [pairs[0].1, pairs[1].1, pairs[2].1];
    // Right-handed frame.
    if axes[0].cross(&axes[1]).dot(&axes[2]) < 0.0 {
        axes[2] = -axes[2];
    }
    (
        Point3::from(mean),
        axes,
        [pairs[0].0, pairs[1].0, pairs[2].0],
    )
}

/// Rank check: smallest-to-largest covariance eigenvalue ratio.
pub(crate) fn is_rank_deficient(eigenvalues: &[f64; 3], tol: f64) -> bool {
    eigenvalues[2] <= tol * eigenvalues[0].max(1e-300)
}
