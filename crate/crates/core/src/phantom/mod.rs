//! Analytic definition of the geometric QA phantom: inclusion shapes,
//! ground-truth meshes, and closed-form descriptors.

mod descriptors;
mod mesh;
mod scene;
mod shape;

pub use descriptors::{analytic_descriptors, ellipsoid_surface_area};
pub use mesh::{ground_truth_mesh, TriangleMesh};
pub use scene::{default_scene, Inclusion, IntensityModel, PhantomScene, SceneDistance};
pub use shape::{
    ellipsoid_closest_point, equilateral_triangle_sdf, equilateral_triangle_vertices,
    extrusion_distance, Aabb, ShapeSpec,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhantomError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("inclusion {0:?} extends outside the block bounds")]
    OutsideBlock(String),
    #[error("inclusions {a:?} and {b:?} overlap")]
    Overlap { a: String, b: String },
    #[error("scene (de)serialization failed: {0}")]
    Serde(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
