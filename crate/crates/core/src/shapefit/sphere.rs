//! Sphere fitting: algebraic initialization + geometric refinement.

use super::optim::{least_squares, LeastSquaresOptions};
use super::{covariance_frame, is_rank_deficient, validate_points, FitResult, ShapeFitError};
use crate::phantom::ShapeSpec;
use nalgebra::{DMatrix, Matrix4, Point3, Vector3, Vector4};

/// Fits a sphere by minimizing Σ(|p−c| − r)².
///
/// The linearized algebraic fit (|p|² = 2c·p + (r² − |c|²)) seeds a
/// Gauss-Newton refinement of the geometric distances.
pub fn fit_sphere(points: &[Point3<f64>]) -> Result<FitResult, ShapeFitError> {
    validate_points(points, 10)?;
    let (_, _, eigenvalues) = covariance_frame(points);
    if is_rank_deficient(&eigenvalues, 1e-10) {
        return Err(ShapeFitError::DegenerateConfiguration(
            "points are coplanar; the sphere is not determined".into(),
        ));
    }

    // Algebraic seed: normal equations for [2c; k] against |p|².
    let mut ata = Matrix4::zeros();
    let mut atb = Vector4::zeros();
    for p in points {
        let row = Vector4::new(2.0 * p.x, 2.0 * p.y, 2.0 * p.z, 1.0);
        ata += row * row.transpose();
        atb += row * p.coords.norm_squared();
    }
    let solution = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| ShapeFitError::DegenerateConfiguration("algebraic seed is singular".into()))?;
    let c0 = Vector3::new(solution[0], solution[1], solution[2]);
    let r0 = (solution[3] + c0.norm_squared()).max(0.0).sqrt();

    let residuals = |params: &[f64]| -> Vec<f64> {
        let c = Vector3::new(params[0], params[1], params[2]);
        let r = params[3];
        points.iter().map(|p| (p.coords - c).norm() - r).collect()
    };
    let jacobian = |params: &[f64], _res: &[f64]| -> DMatrix<f64> {
        let c = Vector3::new(params[0], params[1], params[2]);
        let mut jac = DMatrix::zeros(points.len(), 4);
        for (i, p) in points.iter().enumerate() {
            let d = p.coords - c;
            let n = d.norm().max(1e-12);
            jac[(i, 0)] = -d.x / n;
            jac[(i, 1)] = -d.y / n;
            jac[(i, 2)] = -d.z / n;
            jac[(i, 3)] = -1.0;
        }
        jac
    };

    let outcome = least_squares(
        &[c0.x, c0.y, c0.z, r0],
        residuals,
        Some(jacobian),
        &LeastSquaresOptions::default(),
    );
    let radius = outcome.params[3].abs();
    Ok(FitResult {
        shape: ShapeSpec::Sphere {
            center: Point3::new(outcome.params[0], outcome.params[1], outcome.params[2]),
            radius,
        },
        rms_residual: outcome.rms,
        converged: outcome.converged,
        iterations: outcome.iterations,
        residual_history: outcome.residual_history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapefit::sample_shape_surface;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn exact_samples_recover_exact_parameters() {
        let truth = ShapeSpec::Sphere {
            center: Point3::new(18.0, -3.0, 30.0),
            radius: 11.57,
        };
        let pts = sample_shape_surface(&truth, 1.5);
        let fit = fit_sphere(&pts).unwrap();
        let ShapeSpec::Sphere { center, radius } = fit.shape else {
            panic!()
        };
        assert!((radius - 11.57).abs() < 1e-6, "radius {radius}");
        assert!((center - Point3::new(18.0, -3.0, 30.0)).norm() < 1e-6);
        assert!(fit.rms_residual < 1e-9);
        assert!(fit.converged);
    }

    #[test]
    fn noisy_radius_stays_within_a_tenth_of_a_millimetre() {
        // Monte-Carlo: σ = 0.3 mm radial noise, 20 seeds.
        let truth = ShapeSpec::Sphere {
            center: Point3::origin(),
            radius: 11.57,
        };
        let base = sample_shape_surface(&truth, 1.0);
        for seed in 0..20 {
            let mut rng = crate::rng::derive_rng(seed, crate::rng::Stream::Render, 0);
            let gauss: Normal<f64> = Normal::new(0.0, 0.3).unwrap();
            let noisy: Vec<Point3<f64>> = base
                .iter()
                .map(|p| {
                    let mut q = *p;
                    for a in 0..3 {
                        q[a] += gauss.sample(&mut rng);
                    }
                    q
                })
                .collect();
            let fit = fit_sphere(&noisy).unwrap();
            let ShapeSpec::Sphere { radius, .. } = fit.shape else {
                panic!()
            };
            assert!(
                (radius - 11.57).abs() < 0.1,
                "seed {seed}: radius {radius}"
            );
        }
    }

    #[test]
    fn residual_history_never_increases() {
        let truth = ShapeSpec::Sphere {
            center: Point3::new(5.0, 5.0, 5.0),
            radius: 8.0,
        };
        let mut rng = crate::rng::derive_rng(3, crate::rng::Stream::Render, 0);
        let pts: Vec<Point3<f64>> = sample_shape_surface(&truth, 1.0)
            .into_iter()
            .map(|p| {
                let mut q = p;
                for a in 0..3 {
                    q[a] += rng.random_range(-0.5..0.5);
                }
                q
            })
            .collect();
        let fit = fit_sphere(&pts).unwrap();
        for w in fit.residual_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn rigid_motion_equivariance() {
        use crate::transforms::RigidTransform;
        let truth = ShapeSpec::Sphere {
            center: Point3::new(1.0, 2.0, 3.0),
            radius: 9.0,
        };
        let pts = sample_shape_surface(&truth, 1.5);
        let t = RigidTransform::new(
            nalgebra::UnitQuaternion::from_euler_angles(0.4, -0.8, 1.2),
            Vector3::new(10.0, -20.0, 5.0),
        );
        let moved: Vec<Point3<f64>> = pts.iter().map(|p| t.apply(p)).collect();
        let fit = fit_sphere(&moved).unwrap();
        let ShapeSpec::Sphere { center, radius } = fit.shape else {
            panic!()
        };
        assert!((radius - 9.0).abs() < 1e-6);
        assert!((center - t.apply(&Point3::new(1.0, 2.0, 3.0))).norm() < 1e-6);
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let pts: Vec<Point3<f64>> = (0..40)
            .map(|k| {
                let a = k as f64 * 0.37;
                Point3::new(a.cos() * 5.0, a.sin() * 5.0, 2.0)
            })
            .collect();
        assert!(matches!(
            fit_sphere(&pts),
            Err(ShapeFitError::DegenerateConfiguration(_))
        ));
    }
}
