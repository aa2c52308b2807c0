//! Voxel-based forward mapping with maximum-value compounding.

use super::grid::{GridGeometry, VoxelGrid};
use super::ReconstructionError;
use crate::segmentation::BinaryMask;
use crate::transforms::RigidTransform;
use nalgebra::Point3;

/// A segmented frame ready for compounding. `pose` maps image coordinates
/// `(col·pixel_spacing, row·pixel_spacing, 0)` to world millimetres.
#[derive(Debug, Clone, Copy)]
pub struct FrameContribution<'a> {
    pub mask: &'a BinaryMask,
    pub pose: &'a RigidTransform,
    pub pixel_spacing: f64,
}

/// Frame extent description used for automatic grid sizing.
#[derive(Debug, Clone, Copy)]
pub struct FrameFootprint {
    pub width_px: usize,
    pub height_px: usize,
    pub pixel_spacing: f64,
    pub pose: RigidTransform,
}

/// Inserts one frame: each foreground pixel maps to its nearest voxel and
/// compounds by maximum (mask pixels stamp 255). Returns the number of
/// pixels that fell outside the grid — reported, not an error.
pub fn insert_frame(grid: &mut VoxelGrid, frame: &FrameContribution) -> usize {
    let mask = frame.mask;
    let s = frame.pixel_spacing;
    // Incremental pixel-to-world mapping: walking the image raster adds
    // one rotated basis step per pixel instead of a full transform.
    let origin = frame.pose.apply(&Point3::origin());
    let du = frame.pose.rotate(&nalgebra::Vector3::new(s, 0.0, 0.0));
    let dv = frame.pose.rotate(&nalgebra::Vector3::new(0.0, s, 0.0));
    let mut out_of_grid = 0usize;
    for row in 0..mask.height {
        let row_start = origin + dv * row as f64;
        let row_pixels = &mask.data[row * mask.width..(row + 1) * mask.width];
        for (col, &set) in row_pixels.iter().enumerate() {
            if !set {
                continue;
            }
            let p = row_start + du * col as f64;
            match grid.geom.world_to_voxel(&p) {
                Some([i, j, k]) => {
                    let idx = grid.geom.index(i, j, k);
                    grid.values[idx] = grid.values[idx].max(255);
                    grid.hit_count[idx] += 1;
                }
                None => out_of_grid += 1,
            }
        }
    }
    out_of_grid
}

/// Result of compounding a frame sequence.
#[derive(Debug)]
pub struct ReconstructedVolume {
    pub grid: VoxelGrid,
    /// Total foreground pixels that mapped outside the grid.
    pub out_of_grid_pixels: usize,
}

/// Folds `insert_frame` over all frames. Maximum compounding commutes, so
/// the result is bit-identical under any frame permutation.
pub fn reconstruct(
    frames: &[FrameContribution],
    geom: GridGeometry,
) -> Result<ReconstructedVolume, ReconstructionError> {
    if frames.is_empty() {
        return Err(ReconstructionError::InvalidInput(
            "reconstruction needs at least one frame".into(),
        ));
    }
    let mut grid = VoxelGrid::new(geom)?;
    let mut out_of_grid = 0;
    for frame in frames {
        out_of_grid += insert_frame(&mut grid, frame);
    }
    Ok(ReconstructedVolume {
        grid,
        out_of_grid_pixels: out_of_grid,
    })
}

/// Grid geometry covering the axis-aligned bounding box of all frame
/// footprints, padded by 5 mm on every face.
pub fn auto_grid(
    frames: &[FrameFootprint],
    spacing: f64,
) -> Result<GridGeometry, ReconstructionError> {
    const PADDING_MM: f64 = 5.0;
    if frames.is_empty() {
        return Err(ReconstructionError::InvalidInput(
            "auto grid needs at least one frame".into(),
        ));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(ReconstructionError::InvalidInput(format!(
            "voxel spacing must be positive, got {spacing}"
        )));
    }
    let mut min = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut max = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for f in frames {
        let w = (f.width_px.saturating_sub(1)) as f64 * f.pixel_spacing;
        let h = (f.height_px.saturating_sub(1)) as f64 * f.pixel_spacing;
        for corner in [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(w, 0.0, 0.0),
            Point3::new(0.0, h, 0.0),
            Point3::new(w, h, 0.0),
        ] {
            let p = f.pose.apply(&corner);
            for a in 0..3 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
    }
    let origin = Point3::new(min.x - PADDING_MM, min.y - PADDING_MM, min.z - PADDING_MM);
    let mut dims = [0usize; 3];
    for a in 0..3 {
        dims[a] = (((max[a] + PADDING_MM) - origin[a]) / spacing).ceil() as usize + 1;
    }
    Ok(GridGeometry {
        origin,
        spacing,
        dims,
    })
}
