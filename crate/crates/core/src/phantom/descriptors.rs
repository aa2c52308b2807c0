//! Closed-form shape descriptors for the analytic inclusions.
//!
//! These are the ground-truth values that reconstructed-shape descriptors
//! are compared against, computed with the same conventions
//! (sphericity-style roundness, covariance-eigenvalue elongation and
//! flatness).

use super::shape::{equilateral_triangle_vertices, ShapeSpec};
use crate::metrics::DescriptorRecord;
use nalgebra::Vector3;

/// Closed-form descriptor record for an analytic shape.
pub fn analytic_descriptors(spec: &ShapeSpec) -> DescriptorRecord {
    match spec {
        ShapeSpec::Sphere { center, radius } => {
            let r = *radius;
            let volume = 4.0 / 3.0 * std::f64::consts::PI * r.powi(3);
            let area = 4.0 * std::f64::consts::PI * r * r;
            descriptor(
                volume,
                area,
                *center,
                2.0 * r,
                [Vector3::x(), Vector3::y(), Vector3::z()],
                [r * r / 5.0; 3],
            )
        }
        ShapeSpec::Ellipsoid {
            center,
            semi_axes,
            orientation,
        } => {
            let [a, b, c] = *semi_axes;
            let volume = 4.0 / 3.0 * std::f64::consts::PI * a * b * c;
            let area = ellipsoid_surface_area(*semi_axes);
            let rot = orientation.to_rotation_matrix();
            let axes = [
                rot * Vector3::x(),
                rot * Vector3::y(),
                rot * Vector3::z(),
            ];
            // Solid-ellipsoid covariance eigenvalues are aᵢ²/5.
            let eig = [a * a / 5.0, b * b / 5.0, c * c / 5.0];
            let a_max = a.max(b).max(c);
            descriptor(volume, area, *center, 2.0 * a_max, axes, eig)
        }
        ShapeSpec::Cylinder {
            center,
            axis,
            radius,
            height,
        } => {
            let r = *radius;
            let h = *height;
            let volume = std::f64::consts::PI * r * r * h;
            let area = 2.0 * std::f64::consts::PI * r * (r + h);
            let feret = (4.0 * r * r + h * h).sqrt();
            let (u, v) = orthonormal_complement(axis);
            descriptor(
                volume,
                area,
                *center,
                feret,
                [axis.into_inner(), u, v],
                [h * h / 12.0, r * r / 4.0, r * r / 4.0],
            )
        }
        ShapeSpec::TriPrism {
            edge_length,
            height,
            pose,
        } => {
            let l = *edge_length;
            let h = *height;
            let tri_area = 3.0f64.sqrt() / 4.0 * l * l;
            let volume = tri_area * h;
            let area = 2.0 * tri_area + 3.0 * l * h;
            // Feret: opposite-cap corner pair; max in-plane vertex
            // separation is the edge length itself.
            let feret = (l * l + h * h).sqrt();
            let verts = equilateral_triangle_vertices(l);
            let axis = pose.rotate(&Vector3::z());
            let u = pose.rotate(&Vector3::new(verts[0].x, verts[0].y, 0.0).normalize());
            let v = axis.cross(&u);
            descriptor(
                volume,
                area,
                spec.centroid(),
                feret,
                [axis, u, v],
                // In-plane solid-triangle variance is L²/24, isotropic.
                [h * h / 12.0, l * l / 24.0, l * l / 24.0],
            )
        }
    }
}

fn descriptor(
    volume: f64,
    surface_area: f64,
    centroid: nalgebra::Point3<f64>,
    feret_max: f64,
    axes: [Vector3<f64>; 3],
    eigenvalues: [f64; 3],
) -> DescriptorRecord {
    // Sort eigenpairs descending.
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap());
    let eig = [
        eigenvalues[idx[0]],
        eigenvalues[idx[1]],
        eigenvalues[idx[2]],
    ];
    let axes = [axes[idx[0]], axes[idx[1]], axes[idx[2]]];
    DescriptorRecord {
        volume,
        surface_area,
        centroid,
        feret_max,
        roundness: (36.0 * std::f64::consts::PI * volume * volume).cbrt() / surface_area,
        flatness: (eig[1] / eig[2]).sqrt(),
        elongation: (eig[0] / eig[1]).sqrt(),
        principal_axes: axes,
        eigenvalues: eig,
    }
}

fn orthonormal_complement(axis: &nalgebra::Unit<Vector3<f64>>) -> (Vector3<f64>, Vector3<f64>) {
    let a = axis.into_inner();
    let helper = if a.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let u = a.cross(&helper).normalize();
    let v = a.cross(&u);
    (u, v)
}

/// Exact surface area of a general ellipsoid via Legendre incomplete
/// elliptic integrals in Carlson symmetric form.
pub fn ellipsoid_surface_area(semi_axes: [f64; 3]) -> f64 {
    let mut e = semi_axes;
    e.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = e;
    if (a - c) / a < 1e-10 {
        // Numerically spherical.
        return 4.0 * std::f64::consts::PI * a * b;
    }
    let cos_phi = c / a;
    let sin_phi_sq = 1.0 - cos_phi * cos_phi;
    let sin_phi = sin_phi_sq.sqrt();
    let k_sq = (a * a * (b * b - c * c)) / (b * b * (a * a - c * c));
    let x = cos_phi * cos_phi;
    let y = 1.0 - k_sq * sin_phi_sq;
    let f = sin_phi * carlson_rf(x, y, 1.0);
    let ei = f - k_sq * sin_phi * sin_phi_sq / 3.0 * carlson_rd(x, y, 1.0);
    2.0 * std::f64::consts::PI * c * c
        + 2.0 * std::f64::consts::PI * a * b / sin_phi * (ei * sin_phi_sq + f * (1.0 - sin_phi_sq))
}

/// Carlson symmetric elliptic integral R_F (duplication method).
fn carlson_rf(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0025;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// Carlson symmetric elliptic integral R_D (duplication method).
fn carlson_rd(mut x: f64, mut y: f64, mut z: f64) -> f64 {
    const ERRTOL: f64 = 0.0015;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    let c5 = 0.25 * C3;
    let c6 = 1.5 * C4;
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = 0.2 * (x + y + 3.0 * z);
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            return 3.0 * sum
                + fac
                    * (1.0 + ed * (-C1 + c5 * ed - c6 * dz * ee)
                        + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
                    / (ave * ave.sqrt());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Point3, UnitQuaternion};

    #[test]
    fn sphere_descriptors_are_exact() {
        let s = ShapeSpec::Sphere {
            center: Point3::new(1.0, 2.0, 3.0),
            radius: 11.5,
        };
        let d = analytic_descriptors(&s);
        // 4/3·π·11.5³ = 6370.6 mm³
        assert!((d.volume - 6371.0).abs() < 1.0, "volume {}", d.volume);
        assert!((d.roundness - 1.0).abs() < 1e-12);
        assert!((d.elongation - 1.0).abs() < 1e-12);
        assert!((d.feret_max - 23.0).abs() < 1e-12);
    }

    #[test]
    fn prolate_ellipsoid_elongation_is_two() {
        let e = ShapeSpec::Ellipsoid {
            center: Point3::origin(),
            semi_axes: [24.65, 12.33, 12.33],
            orientation: UnitQuaternion::identity(),
        };
        let d = analytic_descriptors(&e);
        assert!((d.elongation - 2.0).abs() < 0.01, "elongation {}", d.elongation);
        assert!((d.flatness - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_area_matches_prolate_closed_form() {
        let (a, b) = (24.65f64, 12.33f64);
        let got = ellipsoid_surface_area([a, b, b]);
        let e = (1.0 - b * b / (a * a)).sqrt();
        let want = 2.0 * std::f64::consts::PI * b * b * (1.0 + a / (b * e) * e.asin());
        assert!((got - want).abs() / want < 1e-10, "got {got}, want {want}");
    }

    #[test]
    fn ellipsoid_area_matches_oblate_closed_form() {
        let (a, c) = (12.0f64, 8.0f64);
        let got = ellipsoid_surface_area([a, a, c]);
        let e = (1.0 - c * c / (a * a)).sqrt();
        let want = 2.0 * std::f64::consts::PI * a * a
            + std::f64::consts::PI * c * c / e * ((1.0 + e) / (1.0 - e)).ln();
        assert!((got - want).abs() / want < 1e-10, "got {got}, want {want}");
    }

    #[test]
    fn ellipsoid_area_sphere_limit() {
        let got = ellipsoid_surface_area([7.0, 7.0, 7.0]);
        let want = 4.0 * std::f64::consts::PI * 49.0;
        assert!((got - want).abs() / want < 1e-9);
    }

    #[test]
    fn descriptor_volumes_match_mesh_volumes() {
        let specs = [
            ShapeSpec::Cylinder {
                center: Point3::origin(),
                axis: nalgebra::Vector3::x_axis(),
                radius: 11.96,
                height: 42.57,
            },
            ShapeSpec::TriPrism {
                edge_length: 23.51,
                height: 36.98,
                pose: crate::transforms::RigidTransform::identity(),
            },
        ];
        for spec in &specs {
            let d = analytic_descriptors(spec);
            let mesh = super::super::mesh::ground_truth_mesh(spec, 0.5).unwrap();
            let rel = (mesh.volume() - d.volume).abs() / d.volume;
            assert!(rel < 0.005, "{spec:?}: rel {rel}");
        }
    }

    #[test]
    fn ellipsoid_area_agrees_with_fine_mesh() {
        let spec = ShapeSpec::Ellipsoid {
            center: Point3::origin(),
            semi_axes: [20.0, 12.0, 8.0],
            orientation: UnitQuaternion::identity(),
        };
        let d = analytic_descriptors(&spec);
        let mesh = super::super::mesh::ground_truth_mesh(&spec, 0.5).unwrap();
        // Inscribed mesh area converges from below.
        let rel = (mesh.area() - d.surface_area).abs() / d.surface_area;
        assert!(rel < 0.005, "area rel {rel}");
    }
}
