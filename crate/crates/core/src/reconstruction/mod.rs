//! Voxel-based forward-mapped 3D reconstruction: maximum-value
//! compounding, connected-component labeling, and surface extraction.

mod compound;
mod grid;
mod label;
mod surface;

pub use compound::{
    auto_grid, insert_frame, reconstruct, FrameContribution, FrameFootprint, ReconstructedVolume,
};
pub use grid::{voxelize_region, voxelize_shape, GridGeometry, VoxelGrid, VoxelMask};
pub use label::{threshold_and_label, LabeledComponents};
pub use surface::extract_surface;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReconstructionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
