//! Volumetric and surface agreement metrics, shape descriptors,
//! surface-error maps, and the resolution-limited agreement bound.
//!
//! All operations are pure; spatial indices are built per call, so
//! shapes can be evaluated in parallel.

mod descriptors;
mod dice;
mod error_map;
mod hausdorff;
mod resolution;

pub use descriptors::{shape_descriptors, DescriptorRecord};
pub use dice::dsc_3d;
pub use error_map::{surface_error_map, MeshDistance, SurfaceErrorMap};
pub use hausdorff::{hausdorff, HausdorffResult};
pub use resolution::{resolution_limited_dsc, resolution_limited_volume_error};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate component: {0}")]
    DegenerateComponent(String),
}
