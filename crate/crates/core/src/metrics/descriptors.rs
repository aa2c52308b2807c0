//! Shape descriptor records and their computation from voxel components.

use super::MetricsError;
use crate::phantom::TriangleMesh;
use crate::reconstruction::VoxelMask;
use crate::spatial::max_pairwise_distance;
use nalgebra::{Matrix3, Point3, Vector3};
use serde::{Deserialize, Serialize};

/// Volumetric and surface descriptors of a solid shape.
///
/// Conventions: roundness is sphericity `(36π V²)^{1/3} / A`; elongation
/// and flatness are square roots of covariance eigenvalue ratios
/// (`√(λ1/λ2)` and `√(λ2/λ3)` with λ1 ≥ λ2 ≥ λ3), so both are ≥ 1 and
/// scale-invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorRecord {
    /// mm³
    pub volume: f64,
    /// mm²
    pub surface_area: f64,
    pub centroid: Point3<f64>,
    /// Maximum caliper distance, mm.
    pub feret_max: f64,
    /// Sphericity in (0, 1]; 1 for a perfect sphere.
    pub roundness: f64,
    /// ≥ 1.
    pub flatness: f64,
    /// ≥ 1.
    pub elongation: f64,
    /// Unit vectors, ordered by descending eigenvalue.
    pub principal_axes: [Vector3<f64>; 3],
    /// mm², descending.
    pub eigenvalues: [f64; 3],
}

/// Feret search switches from the exact quadratic scan to a convex-hull
/// reduction above this vertex count (the reduction is still exact).
const FERET_HULL_CUTOFF: usize = 20_000;

/// Descriptors of a reconstructed component: voxel-based volume, centroid
/// and principal axes; mesh-based surface area and Feret diameter.
pub fn shape_descriptors(
    component: &VoxelMask,
    mesh: &TriangleMesh,
) -> Result<DescriptorRecord, MetricsError> {
    let centers = component.voxel_centers();
    if centers.len() < 4 {
        return Err(MetricsError::DegenerateComponent(format!(
            "component has only {} voxels",
            centers.len()
        )));
    }
    let spacing = component.geom.spacing;
    let volume = centers.len() as f64 * spacing.powi(3);
    let surface_area = mesh.area();
    if surface_area <= 0.0 || mesh.triangles.is_empty() {
        return Err(MetricsError::InvalidInput(
            "component mesh has no surface".into(),
        ));
    }

    let mut mean = Vector3::zeros();
    for p in &centers {
        mean += p.coords;
    }
    mean /= centers.len() as f64;
    let centroid = Point3::from(mean);

    let mut cov = Matrix3::zeros();
    for p in &centers {
        let d = p.coords - mean;
        cov += d * d.transpose();
    }
    cov /= centers.len() as f64;

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
    let eigenvalues = [pairs[0].0, pairs[1].0, pairs[2].0];
    if eigenvalues[2] <= 1e-12 * eigenvalues[0].max(1e-300) {
        return Err(MetricsError::DegenerateComponent(
            "voxels are coplanar; principal axes are not determined".into(),
        ));
    }
    let principal_axes = [pairs[0].1, pairs[1].1, pairs[2].1];

    Ok(DescriptorRecord {
        volume,
        surface_area,
        centroid,
        feret_max: max_pairwise_distance(&mesh.vertices, FERET_HULL_CUTOFF),
        roundness: (36.0 * std::f64::consts::PI * volume * volume).cbrt() / surface_area,
        flatness: (eigenvalues[1] / eigenvalues[2]).sqrt(),
        elongation: (eigenvalues[0] / eigenvalues[1]).sqrt(),
        principal_axes,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phantom::ShapeSpec;
    use crate::reconstruction::{extract_surface, voxelize_shape, GridGeometry};
    use nalgebra::UnitQuaternion;

    fn voxelize_and_mesh(shape: &ShapeSpec, spacing: f64) -> (VoxelMask, TriangleMesh) {
        let bb = shape.aabb().inflate(2.0);
        let dims = [
            ((bb.max.x - bb.min.x) / spacing).ceil() as usize + 1,
            ((bb.max.y - bb.min.y) / spacing).ceil() as usize + 1,
            ((bb.max.z - bb.min.z) / spacing).ceil() as usize + 1,
        ];
        let geom = GridGeometry {
            origin: bb.min,
            spacing,
            dims,
        };
        let mask = voxelize_shape(shape, &geom);
        let mut mesh = extract_surface(&mask).unwrap();
        // The extracted staircase is smoothed before descriptor
        // computation, as in the reporting pipeline.
        mesh.taubin_smooth(80);
        (mask, mesh)
    }

    #[test]
    fn voxelized_sphere_is_round() {
        let shape = ShapeSpec::Sphere {
            center: Point3::new(1.0, -2.0, 5.0),
            radius: 11.57,
        };
        let (mask, mesh) = voxelize_and_mesh(&shape, 0.5);
        let d = shape_descriptors(&mask, &mesh).unwrap();
        assert!(d.roundness >= 0.97, "roundness {}", d.roundness);
        assert!(d.roundness <= 1.01, "roundness {}", d.roundness);
        assert!(d.elongation <= 1.03, "elongation {}", d.elongation);
        let analytic_v = 4.0 / 3.0 * std::f64::consts::PI * 11.57f64.powi(3);
        assert!((d.volume - analytic_v).abs() / analytic_v < 0.01);
        assert!((d.centroid - Point3::new(1.0, -2.0, 5.0)).norm() < 0.1);
        assert!((d.feret_max - 2.0 * 11.57).abs() < 0.8);
    }

    #[test]
    fn voxelized_prolate_ellipsoid_elongation_near_two() {
        let orientation = UnitQuaternion::from_euler_angles(0.3, 0.5, -0.2);
        let shape = ShapeSpec::Ellipsoid {
            center: Point3::origin(),
            semi_axes: [24.65, 12.33, 12.33],
            orientation,
        };
        let (mask, mesh) = voxelize_and_mesh(&shape, 0.5);
        let d = shape_descriptors(&mask, &mesh).unwrap();
        assert!(
            (d.elongation - 2.0).abs() <= 0.05,
            "elongation {}",
            d.elongation
        );
        // Principal axis aligns with the rotated major axis.
        let major = orientation * Vector3::x();
        assert!(d.principal_axes[0].dot(&major).abs() > 0.999);
    }

    #[test]
    fn analytic_cube_feret_is_space_diagonal() {
        // Hand-built cube mesh, side 10: Feret = 10√3.
        let corners = [
            [0.0, 0.0, 0.0],
            [10.0, 0.0, 0.0],
            [0.0, 10.0, 0.0],
            [10.0, 10.0, 0.0],
            [0.0, 0.0, 10.0],
            [10.0, 0.0, 10.0],
            [0.0, 10.0, 10.0],
            [10.0, 10.0, 10.0],
        ];
        let vertices: Vec<Point3<f64>> = corners
            .iter()
            .map(|c| Point3::new(c[0], c[1], c[2]))
            .collect();
        let feret = max_pairwise_distance(&vertices, FERET_HULL_CUTOFF);
        let want = 10.0 * 3.0f64.sqrt();
        assert!((feret - want).abs() / want < 0.02);
    }

    #[test]
    fn elongation_and_flatness_are_scale_invariant() {
        let shape = ShapeSpec::Cylinder {
            center: Point3::origin(),
            axis: Vector3::x_axis(),
            radius: 11.96,
            height: 42.57,
        };
        let (mask, mesh) = voxelize_and_mesh(&shape, 0.5);
        let d1 = shape_descriptors(&mask, &mesh).unwrap();
        // Scale every coordinate by 2: same voxel pattern on a grid with
        // doubled spacing and origin.
        let mut scaled = mask.clone();
        scaled.geom.spacing *= 2.0;
        scaled.geom.origin = Point3::from(mask.geom.origin.coords * 2.0);
        let mut scaled_mesh = mesh.clone();
        for v in &mut scaled_mesh.vertices {
            *v = Point3::from(v.coords * 2.0);
        }
        let d2 = shape_descriptors(&scaled, &scaled_mesh).unwrap();
        assert!((d1.elongation - d2.elongation).abs() < 1e-9);
        assert!((d1.flatness - d2.flatness).abs() < 1e-9);
    }

    #[test]
    fn roundness_is_rigid_motion_invariant_within_revoxelization() {
        let base = ShapeSpec::Cylinder {
            center: Point3::origin(),
            axis: Vector3::x_axis(),
            radius: 11.96,
            height: 42.57,
        };
        let moved = ShapeSpec::Cylinder {
            center: Point3::new(3.0, -7.0, 2.0),
            axis: nalgebra::Unit::new_normalize(Vector3::new(0.4, 0.8, -0.3)),
            radius: 11.96,
            height: 42.57,
        };
        let (m1, mesh1) = voxelize_and_mesh(&base, 0.5);
        let (m2, mesh2) = voxelize_and_mesh(&moved, 0.5);
        let d1 = shape_descriptors(&m1, &mesh1).unwrap();
        let d2 = shape_descriptors(&m2, &mesh2).unwrap();
        assert!(
            (d1.roundness - d2.roundness).abs() <= 0.02,
            "roundness {} vs {}",
            d1.roundness,
            d2.roundness
        );
    }

    #[test]
    fn coplanar_component_is_degenerate() {
        let geom = GridGeometry {
            origin: Point3::origin(),
            spacing: 1.0,
            dims: [8, 8, 8],
        };
        let mut mask = VoxelMask::new(geom);
        for j in 0..8 {
            for i in 0..8 {
                mask.data[geom.index(i, j, 3)] = true;
            }
        }
        let mesh = extract_surface(&mask).unwrap();
        assert!(matches!(
            shape_descriptors(&mask, &mesh),
            Err(MetricsError::DegenerateComponent(_))
        ));
    }
}
