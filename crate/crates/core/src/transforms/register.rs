//! Point-set registration: least-squares rigid alignment (Kabsch) and
//! iterative closest point.

use super::{RigidTransform, TransformError};
use crate::phantom::TriangleMesh;
use crate::spatial::KdTree;
use nalgebra::{Matrix3, Point3, UnitQuaternion, Vector3};

/// A set of 3D points in millimetres.
pub type PointSet = Vec<Point3<f64>>;

/// Least-squares rigid transform mapping `moving` onto `fixed`
/// (corresponding points, equal length), plus the fiducial registration
/// error (RMS residual distance after alignment).
///
/// The rotation is always proper (determinant +1): reflective
/// configurations get the nearest rotation instead of a reflection.
pub fn fiducial_register(
    moving: &[Point3<f64>],
    fixed: &[Point3<f64>],
) -> Result<(RigidTransform, f64), TransformError> {
    if moving.len() != fixed.len() {
        return Err(TransformError::InvalidInput(format!(
            "point sets differ in length: {} vs {}",
            moving.len(),
            fixed.len()
        )));
    }
    let n = moving.len();
    if n < 3 {
        return Err(TransformError::DegenerateConfiguration(format!(
            "need at least 3 corresponding points, got {n}"
        )));
    }
    for p in moving.iter().chain(fixed.iter()) {
        if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
            return Err(TransformError::InvalidInput(
                "non-finite point coordinates".into(),
            ));
        }
    }

    let m_centroid = centroid(moving);
    let f_centroid = centroid(fixed);

    // Cross-covariance of the centered sets.
    let mut h = Matrix3::zeros();
    for (m, f) in moving.iter().zip(fixed) {
        h += (f - f_centroid) * (m - m_centroid).transpose();
    }

    let svd = h.svd(true, true);
    let u = svd.u.unwrap();
    let v_t = svd.v_t.unwrap();
    let sv = svd.singular_values;
    // Collinear configurations leave the rotation about the line free.
    let scale = sv[0].max(1e-300);
    if sv[1] <= 1e-9 * scale {
        return Err(TransformError::DegenerateConfiguration(
            "points are collinear; rotation is not determined".into(),
        ));
    }

    let d = (u * v_t).determinant();
    let mut correction = Matrix3::identity();
    correction[(2, 2)] = if d < 0.0 { -1.0 } else { 1.0 };
    let r = u * correction * v_t;

    let rotation = UnitQuaternion::from_matrix(&r);
    let translation = f_centroid.coords - rotation * m_centroid.coords;
    let transform = RigidTransform::new(rotation, translation);

    let mut sq_sum = 0.0;
    for (m, f) in moving.iter().zip(fixed) {
        sq_sum += (transform.apply(m) - f).norm_squared();
    }
    let fre = (sq_sum / n as f64).sqrt();
    Ok((transform, fre))
}

fn centroid(points: &[Point3<f64>]) -> Point3<f64> {
    let sum = points
        .iter()
        .fold(Vector3::zeros(), |acc, p| acc + p.coords);
    Point3::from(sum / points.len() as f64)
}

/// Registration target for ICP: either a raw point set or a surface mesh
/// that is uniformly sampled before matching.
pub enum IcpTarget<'a> {
    Points(&'a [Point3<f64>]),
    Mesh(&'a TriangleMesh),
}

/// Spacing used when an ICP target mesh is converted to surface samples.
const MESH_SAMPLE_SPACING: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct IcpResult {
    pub transform: RigidTransform,
    /// RMS distance between transformed source points and their closest
    /// target points at the final iteration.
    pub rms: f64,
    pub iterations: usize,
    pub converged: bool,
}

const ICP_MAX_ITERATIONS: usize = 200;
const ICP_RMS_TOLERANCE: f64 = 1e-6;

/// Iterative closest point: alternates nearest-neighbour correspondence
/// with `fiducial_register` until the RMS change drops below 1e-6 mm or
/// 200 iterations. Non-convergence returns the best transform found,
/// flagged `converged: false`.
pub fn icp_register(
    source: &[Point3<f64>],
    target: &IcpTarget,
    init: &RigidTransform,
) -> Result<IcpResult, TransformError> {
    if source.is_empty() {
        return Err(TransformError::InvalidInput("empty ICP source".into()));
    }
    let sampled;
    let target_points: &[Point3<f64>] = match target {
        IcpTarget::Points(p) => p,
        IcpTarget::Mesh(mesh) => {
            sampled = mesh.sample_surface(MESH_SAMPLE_SPACING);
            &sampled
        }
    };
    if target_points.len() < 3 {
        return Err(TransformError::DegenerateConfiguration(
            "ICP target has fewer than 3 points".into(),
        ));
    }
    let tree = KdTree::build(target_points);

    let mut transform = *init;
    let mut prev_rms = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut rms = prev_rms;

    while iterations < ICP_MAX_ITERATIONS {
        iterations += 1;
        let correspondences: Vec<Point3<f64>> = source
            .iter()
            .map(|s| {
                let q = transform.apply(s);
                let (idx, _) = tree.nearest(&q);
                target_points[idx]
            })
            .collect();
        let (refit, fre) = fiducial_register(source, &correspondences)?;
        transform = refit;
        rms = fre;
        if (prev_rms - rms).abs() < ICP_RMS_TOLERANCE {
            converged = true;
            break;
        }
        prev_rms = rms;
    }

    Ok(IcpResult {
        transform,
        rms,
        iterations,
        converged,
    })
}
