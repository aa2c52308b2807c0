//! Per-vertex signed surface deviation between a reconstructed mesh and
//! its co-registered reference.

use super::MetricsError;
use crate::phantom::TriangleMesh;
use crate::spatial::{closest_point_on_triangle, KdTree};
use crate::transforms::RigidTransform;
use nalgebra::{Point3, Vector3};
use std::collections::HashMap;

/// Mesh plus one signed distance per vertex (positive outside the
/// reference surface) and summary statistics.
#[derive(Debug, Clone)]
pub struct SurfaceErrorMap {
    /// The registered prediction mesh the distances refer to.
    pub mesh: TriangleMesh,
    pub vertex_distances: Vec<f64>,
    pub mean: f64,
    pub rms: f64,
    pub max_abs: f64,
}

impl SurfaceErrorMap {
    /// PLY export with the signed distance as a per-vertex `quality`
    /// property.
    pub fn write_ply<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        self.mesh.write_ply(w, Some(&self.vertex_distances))
    }
}

/// Signed distance map from each vertex of `pred` (after applying
/// `registration`) to the surface of `reference`.
pub fn surface_error_map(
    pred: &TriangleMesh,
    reference: &TriangleMesh,
    registration: &RigidTransform,
) -> Result<SurfaceErrorMap, MetricsError> {
    if reference.triangles.is_empty() {
        return Err(MetricsError::InvalidInput(
            "reference mesh has no triangles".into(),
        ));
    }
    if pred.vertices.is_empty() {
        return Err(MetricsError::InvalidInput(
            "prediction mesh has no vertices".into(),
        ));
    }
    let mut mesh = pred.clone();
    mesh.apply_transform(registration);

    let field = MeshDistance::new(reference);
    let vertex_distances: Vec<f64> = mesh.vertices.iter().map(|v| field.signed_distance(v)).collect();

    let n = vertex_distances.len() as f64;
    let mean = vertex_distances.iter().sum::<f64>() / n;
    let rms = (vertex_distances.iter().map(|d| d * d).sum::<f64>() / n).sqrt();
    let max_abs = vertex_distances
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()));
    Ok(SurfaceErrorMap {
        mesh,
        vertex_distances,
        mean,
        rms,
        max_abs,
    })
}

/// Signed distance queries against a watertight triangle mesh.
///
/// Nearest triangles are found through a kd-tree over triangle centroids
/// with a conservative search radius; the sign comes from angle-weighted
/// pseudo-normals (exact for watertight meshes).
pub struct MeshDistance<'a> {
    mesh: &'a TriangleMesh,
    centroid_tree: KdTree,
    max_tri_radius: f64,
    face_normals: Vec<Vector3<f64>>,
    vertex_normals: Vec<Vector3<f64>>,
    edge_normals: HashMap<(u32, u32), Vector3<f64>>,
}

impl<'a> MeshDistance<'a> {
    pub fn new(mesh: &'a TriangleMesh) -> Self {
        let mut centroids = Vec::with_capacity(mesh.triangles.len());
        let mut max_tri_radius = 0.0f64;
        let mut face_normals = Vec::with_capacity(mesh.triangles.len());
        let mut edge_normals: HashMap<(u32, u32), Vector3<f64>> = HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let [a, b, c] = mesh.triangle_points(t);
            let centroid = Point3::from((a.coords + b.coords + c.coords) / 3.0);
            for p in [a, b, c] {
                max_tri_radius = max_tri_radius.max((p - centroid).norm());
            }
            centroids.push(centroid);
            let n = (b - a).cross(&(c - a));
            let n = if n.norm() > 0.0 { n.normalize() } else { n };
            face_normals.push(n);
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                let key = (u.min(v), u.max(v));
                *edge_normals.entry(key).or_insert_with(Vector3::zeros) += n;
            }
        }
        MeshDistance {
            mesh,
            centroid_tree: KdTree::build(&centroids),
            max_tri_radius,
            face_normals,
            vertex_normals: mesh.vertex_pseudo_normals(),
            edge_normals,
        }
    }

    pub fn signed_distance(&self, p: &Point3<f64>) -> f64 {
        let (first, _) = self.centroid_tree.nearest(p);
        let (mut best_d_sq, mut best) = self.triangle_distance(p, first);
        // Any triangle whose centroid is farther than best + max radius
        // cannot contain a closer point.
        let bound = best_d_sq.sqrt() + self.max_tri_radius;
        for t in self.centroid_tree.within(p, bound * bound) {
            if t == first {
                continue;
            }
            let (d_sq, cand) = self.triangle_distance(p, t);
            if d_sq < best_d_sq {
                best_d_sq = d_sq;
                best = cand;
            }
        }
        let (tri_idx, closest, bary) = best;
        let normal = self.feature_normal(tri_idx, &bary);
        let delta = p - closest;
        let d = delta.norm();
        if delta.dot(&normal) < 0.0 {
            -d
        } else {
            d
        }
    }

    fn triangle_distance(
        &self,
        p: &Point3<f64>,
        t: usize,
    ) -> (f64, (usize, Point3<f64>, [f64; 3])) {
        let [a, b, c] = self.mesh.triangle_points(t);
        let (closest, bary) = closest_point_on_triangle(p, &a, &b, &c);
        ((p - closest).norm_squared(), (t, closest, bary))
    }

    /// Pseudo-normal of the closest feature: face interior → face normal,
    /// edge → mean of adjacent face normals, vertex → angle-weighted
    /// vertex normal.
    fn feature_normal(&self, t: usize, bary: &[f64; 3]) -> Vector3<f64> {
        const EPS: f64 = 1e-12;
        let tri = self.mesh.triangles[t];
        let zero: Vec<usize> = (0..3).filter(|&i| bary[i] <= EPS).collect();
        match zero.len() {
            0 => self.face_normals[t],
            1 => {
                let (u, v) = match zero[0] {
                    0 => (tri[1], tri[2]),
                    1 => (tri[0], tri[2]),
                    _ => (tri[0], tri[1]),
                };
                let key = (u.min(v), u.max(v));
                self.edge_normals
                    .get(&key)
                    .cloned()
                    .unwrap_or(self.face_normals[t])
            }
            _ => {
                let vertex = (0..3).find(|&i| bary[i] > EPS).unwrap_or(0);
                self.vertex_normals[tri[vertex] as usize]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::hausdorff;
    use crate::phantom::{ground_truth_mesh, ShapeSpec};

    fn sphere_mesh(r: f64) -> TriangleMesh {
        ground_truth_mesh(
            &ShapeSpec::Sphere {
                center: Point3::origin(),
                radius: r,
            },
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn identical_meshes_have_zero_error() {
        let mesh = sphere_mesh(10.0);
        let map = surface_error_map(&mesh, &mesh, &RigidTransform::identity()).unwrap();
        assert!(map.max_abs < 1e-9, "max {}", map.max_abs);
    }

    #[test]
    fn outward_dilation_reads_plus_one_mm() {
        let reference = sphere_mesh(10.0);
        let mut pred = reference.clone();
        // Dilate 1 mm along (spherical) normals.
        for v in &mut pred.vertices {
            *v = Point3::from(v.coords * (11.0 / 10.0));
        }
        let map = surface_error_map(&pred, &reference, &RigidTransform::identity()).unwrap();
        for &d in map.vertex_distances.iter().step_by(13) {
            assert!((d - 1.0).abs() < 0.05, "distance {d}");
        }
        assert!(map.mean > 0.9 && map.mean < 1.1);
    }

    #[test]
    fn interior_points_are_negative() {
        let reference = sphere_mesh(10.0);
        let field = MeshDistance::new(&reference);
        let d = field.signed_distance(&Point3::new(1.0, 0.5, -0.25));
        assert!(d < -8.0, "centre-ish point should be deep inside, got {d}");
        let d_out = field.signed_distance(&Point3::new(15.0, 0.0, 0.0));
        assert!((d_out - 5.0).abs() < 0.1);
    }

    #[test]
    fn map_max_is_bounded_by_hausdorff_max() {
        let reference = sphere_mesh(10.0);
        let mut pred = sphere_mesh(10.0);
        for (i, v) in pred.vertices.iter_mut().enumerate() {
            let s = 1.0 + 0.03 * ((i % 7) as f64 - 3.0) / 3.0;
            *v = Point3::from(v.coords * s);
        }
        let map = surface_error_map(&pred, &reference, &RigidTransform::identity()).unwrap();
        let h = hausdorff(
            &map.mesh.sample_surface(0.5),
            &reference.sample_surface(0.5),
        )
        .unwrap();
        assert!(map.max_abs <= h.hd_max + 1e-6);
    }

    #[test]
    fn degenerate_reference_is_an_error() {
        let empty = TriangleMesh::default();
        let mesh = sphere_mesh(5.0);
        assert!(surface_error_map(&mesh, &empty, &RigidTransform::identity()).is_err());
    }
}
