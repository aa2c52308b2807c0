//! Deterministic synthetic surface samples of the analytic shapes.
//!
//! The generators respect each shape's symmetry group (Fibonacci points
//! for spheres/ellipsoids, regular grids for cylinder and prism faces),
//! which keeps covariance-based initializers aligned with the true axes
//! on noise-free data.

use crate::phantom::{equilateral_triangle_vertices, ShapeSpec};
use crate::transforms::PointSet;
use nalgebra::{Point3, Vector3};

/// Surface samples at roughly the requested spacing (mm).
pub fn sample_shape_surface(spec: &ShapeSpec, spacing: f64) -> PointSet {
    match spec {
        ShapeSpec::Sphere { center, radius } => {
            let n = sphere_count(*radius, spacing);
            fibonacci_directions(n)
                .map(|d| center + d * *radius)
                .collect()
        }
        ShapeSpec::Ellipsoid {
            center,
            semi_axes,
            orientation,
        } => {
            let r_eq = (semi_axes[0] * semi_axes[1] * semi_axes[2]).cbrt();
            let n = sphere_count(r_eq, spacing);
            fibonacci_directions(n)
                .map(|d| {
                    let on_surface = Vector3::new(
                        d.x * semi_axes[0],
                        d.y * semi_axes[1],
                        d.z * semi_axes[2],
                    );
                    center + orientation * on_surface
                })
                .collect()
        }
        ShapeSpec::Cylinder {
            center,
            axis,
            radius,
            height,
        } => {
            let rot = nalgebra::UnitQuaternion::rotation_between(&Vector3::z(), axis)
                .unwrap_or_else(|| {
                    nalgebra::UnitQuaternion::from_axis_angle(
                        &Vector3::x_axis(),
                        std::f64::consts::PI,
                    )
                });
            let mut pts = Vec::new();
            let n_theta = ((2.0 * std::f64::consts::PI * radius) / spacing).ceil().max(8.0) as usize;
            let n_z = (height / spacing).ceil().max(2.0) as usize;
            for iz in 0..=n_z {
                let z = -height / 2.0 + height * iz as f64 / n_z as f64;
                for it in 0..n_theta {
                    let a = 2.0 * std::f64::consts::PI * it as f64 / n_theta as f64;
                    pts.push(Vector3::new(radius * a.cos(), radius * a.sin(), z));
                }
            }
            // Cap rings, both faces.
            let n_r = (radius / spacing).ceil().max(2.0) as usize;
            for ir in 1..n_r {
                let r = radius * ir as f64 / n_r as f64;
                let n_c = ((2.0 * std::f64::consts::PI * r) / spacing).ceil().max(6.0) as usize;
                for it in 0..n_c {
                    let a = 2.0 * std::f64::consts::PI * it as f64 / n_c as f64;
                    for z in [-height / 2.0, height / 2.0] {
                        pts.push(Vector3::new(r * a.cos(), r * a.sin(), z));
                    }
                }
            }
            for z in [-height / 2.0, height / 2.0] {
                pts.push(Vector3::new(0.0, 0.0, z));
            }
            pts.into_iter().map(|v| center + rot * v).collect()
        }
        ShapeSpec::TriPrism {
            edge_length,
            height,
            pose,
        } => {
            let verts = equilateral_triangle_vertices(*edge_length);
            let mut pts: Vec<Point3<f64>> = Vec::new();
            let n_e = (edge_length / spacing).ceil().max(3.0) as usize;
            let n_z = (height / spacing).ceil().max(2.0) as usize;
            // Side faces: identical grid per face keeps 3-fold symmetry.
            for k in 0..3 {
                let a = verts[k];
                let b = verts[(k + 1) % 3];
                for ie in 0..=n_e {
                    let t = ie as f64 / n_e as f64;
                    let q = a + (b - a) * t;
                    for iz in 0..=n_z {
                        let z = -height / 2.0 + height * iz as f64 / n_z as f64;
                        pts.push(Point3::new(q.x, q.y, z));
                    }
                }
            }
            // Caps: barycentric lattice (invariant under vertex cycling).
            for i in 0..=n_e {
                for j in 0..=(n_e - i) {
                    let u = i as f64 / n_e as f64;
                    let v = j as f64 / n_e as f64;
                    let w = 1.0 - u - v;
                    let q = Point3::new(
                        u * verts[0].x + v * verts[1].x + w * verts[2].x,
                        u * verts[0].y + v * verts[1].y + w * verts[2].y,
                        0.0,
                    );
                    for z in [-height / 2.0, height / 2.0] {
                        pts.push(Point3::new(q.x, q.y, z));
                    }
                }
            }
            pts.into_iter().map(|p| pose.apply(&p)).collect()
        }
    }
}

fn sphere_count(radius: f64, spacing: f64) -> usize {
    let area = 4.0 * std::f64::consts::PI * radius * radius;
    ((area / (spacing * spacing)).ceil() as usize).max(64)
}

/// Fibonacci-lattice unit directions (near-uniform, deterministic).
fn fibonacci_directions(n: usize) -> impl Iterator<Item = Vector3<f64>> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..n).map(move |k| {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = 2.0 * std::f64::consts::PI * k as f64 / golden;
        Vector3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::RigidTransform;

    #[test]
    fn samples_lie_on_their_surfaces() {
        let shapes = [
            ShapeSpec::Sphere {
                center: Point3::new(2.0, 1.0, -3.0),
                radius: 11.57,
            },
            ShapeSpec::Ellipsoid {
                center: Point3::origin(),
                semi_axes: [24.65, 12.33, 12.33],
                orientation: nalgebra::UnitQuaternion::from_euler_angles(0.4, -0.7, 0.2),
            },
            ShapeSpec::Cylinder {
                center: Point3::new(1.0, 1.0, 1.0),
                axis: nalgebra::Unit::new_normalize(Vector3::new(1.0, -0.5, 0.25)),
                radius: 11.96,
                height: 42.57,
            },
            ShapeSpec::TriPrism {
                edge_length: 23.51,
                height: 36.98,
                pose: RigidTransform::new(
                    nalgebra::UnitQuaternion::from_euler_angles(-0.3, 0.9, 0.5),
                    Vector3::new(4.0, 0.0, -2.0),
                ),
            },
        ];
        for shape in &shapes {
            let pts = sample_shape_surface(shape, 1.5);
            assert!(pts.len() > 100, "{shape:?}: only {} samples", pts.len());
            for p in &pts {
                assert!(
                    shape.signed_distance(p).abs() < 1e-9,
                    "{shape:?}: sample {p:?} off surface"
                );
            }
        }
    }
}
